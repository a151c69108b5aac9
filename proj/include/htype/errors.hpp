#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace htype {

/// Base of every error thrown by the library. Inside the classification
/// pipeline `stage()` names the step that raised it.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}

  const std::string& stage() const noexcept { return stage_; }
  void set_stage(std::string stage) { stage_ = std::move(stage); }

 private:
  std::string stage_;
};

/// Malformed arguments: wrong dimensions, bad indices, non-unit vectors.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A named axiom defect exceeded the tolerance while loading or validating.
class ValidationError : public InputError {
 public:
  ValidationError(const std::string& defect, double magnitude)
      : InputError("validation defect '" + defect + "' = " + std::to_string(magnitude)),
        defect_(defect),
        magnitude_(magnitude) {}

  const std::string& defect() const noexcept { return defect_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  std::string defect_;
  double magnitude_;
};

/// The input is well formed but has a shape that rules the operation out
/// (odd real dimension for a complex structure, dim v not divisible by 4, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// The operation needs a nontrivial v (or center) and got the zero space.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A caller-side precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotCentralError : public InputError {
 public:
  explicit NotCentralError(double residual)
      : InputError("not central: residual " + std::to_string(residual)), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace htype
