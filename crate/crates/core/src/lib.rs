//! Finite-type Garside categories from germ descriptions.
//!
//! The entry point is a [`germ::GermTable`], either parsed from the text
//! format ([`germ::parse_germ`]) or produced by one of the [`builtins`].
//! [`germ::validate`] turns it into a [`germ::GarsideGerm`], on which the
//! remaining modules operate:
//!
//! * [`free`]: left-greedy normal forms and the groupoid of fractions;
//! * [`conjugacy`]: cycling, decycling, summit sets and fixed subgerms;
//! * [`divided`]: the m-divided germ and the embedding functor into it;
//! * [`periodic`]: periodic elements and their explicit conjugators;
//! * [`nerve`]: Garside nerve combinatorics.

pub mod builtins;
pub mod conjugacy;
pub mod divided;
pub mod error;
pub mod free;
pub mod germ;
pub mod nerve;
pub mod periodic;

pub use error::{Error, Result};

pub use germ::{GarsideGerm, GermTable, ObjectId, SimpleId};
