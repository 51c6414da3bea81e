//! Scenario studies (placeholder while the solver lands).
