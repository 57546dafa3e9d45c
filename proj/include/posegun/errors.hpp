#pragma once

#include <stdexcept>
#include <string>

namespace posegun {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Degenerate or otherwise invalid box geometry.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Structurally malformed input (bad JSON, wrong field count, bad CSV row).
class ParseError : public Error {
public:
  using Error::Error;
};

/// Well-formed input that violates a dataset contract (bad manifest entry,
/// missing pose half, empty dataset, unknown image id).
class DataError : public Error {
public:
  using Error::Error;
};

/// Skeleton cannot be normalized: Neck or MidHip undetected.
class NormalizationError : public Error {
public:
  using Error::Error;
};

/// Skeleton normalization scale is zero (Neck and MidHip coincide).
class DegenerateSkeletonError : public NormalizationError {
public:
  using NormalizationError::NormalizationError;
};

/// Model input does not match the model variant or expected shape.
class InputError : public Error {
public:
  using Error::Error;
};

/// Corrupt, truncated, or inconsistent checkpoint file.
class CheckpointError : public Error {
public:
  using Error::Error;
};

/// Evaluation is undefined (no ground-truth boxes in the dataset).
class EvalError : public Error {
public:
  using Error::Error;
};

/// A referenced input file is missing or unreadable.
class IoError : public Error {
public:
  using Error::Error;
};

/// An output file could not be written.
class WriteError : public Error {
public:
  using Error::Error;
};

} // namespace posegun
