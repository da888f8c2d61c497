// SPDX-License-Identifier: BSD-3-Clause
//
// Error taxonomy shared by the whole library. Every failure mode a caller can
// act on gets its own type; anything else is a plain Error.

#pragma once

#include <stdexcept>
#include <string>

namespace twophase {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid physical or mathematical input (non-positive temperature,
/// equal phase densities where a jump is required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration file or command-line problem: unknown key, missing section,
/// type mismatch, missing required callable.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Height field violates the admissibility bounds of the graph
/// parameterization (|h| < R/10, |grad h| < 1/10).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Input is not resolved on the requested grid (band-limit check failed).
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Array shape / grid size mismatch between a sampled state and its config.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Linear solve or iteration failed to converge / system numerically singular.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Well-posedness violated: the continuous problem has no solution for the
/// given data (e.g. heat transmission problem at lambda = 0 with a mean).
class SolvabilityError : public Error {
 public:
  using Error::Error;
};

/// Complex evaluation requested on or across a branch cut.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// A function value on a certification contour fell below the modulus
/// threshold; the contour passes through (or too close to) a zero and must
/// be perturbed before a winding number means anything.
class ContourError : public Error {
 public:
  using Error::Error;
};

/// Conserved quantities admit no equilibrium of the requested topology.
class NoEquilibriumError : public Error {
 public:
  using Error::Error;
};

}  // namespace twophase
