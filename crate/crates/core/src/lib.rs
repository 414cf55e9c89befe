//! Exact arithmetic on Heisenberg groups and their r-adic and solenoidal
//! relatives.
//!
//! * [`ring`]: residues, r-adic integers, the truncated product space and
//!   its ultrametric.
//! * [`heisenberg`]: the group law `(x,y,t)(x',y',t') = (x+x', y+y', t+t'+x.y')`
//!   over any [`ring::Coefficient`].
//! * [`finite`]: brute-force structure of `H_n(Z/kZ)` and its subgroups.
//! * [`profinite`]: coherent sequences of finite quotients and `H_n(Z_r)`.
//! * [`solenoid`]: circle and Heisenberg solenoids over exact rationals.
//! * [`subriemannian`]: horizontal paths, Carnot-Caratheodory distance
//!   estimates and volume scaling (floating point).
//! * [`wire`]: JSON formats shared with the command-line front end.
//! * [`verify`]: runtime property suites.

pub mod error;
pub mod exec;
pub mod finite;
pub mod heisenberg;
pub mod profinite;
pub mod ring;
pub mod solenoid;
pub mod subriemannian;
pub mod verify;
pub mod wire;

pub use error::{Error, Result};
pub use exec::Strategy;
pub use heisenberg::{Dilation, HeisenbergPoint};
