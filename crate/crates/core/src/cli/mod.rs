//! Command-line front end (placeholder while the solver lands).
