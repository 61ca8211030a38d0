#pragma once

#include <stdexcept>
#include <string>

namespace meixner {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or violated precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The vector (X, Y) fails non-degeneracy, or a fit collapsed because of it.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A stage of the decoupling pipeline could not be carried out.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

/// The final moment certificate did not hold.
class AuditError : public Error {
 public:
  AuditError(const std::string& what, std::string worst_word, double worst_diff)
      : Error(what), worst_word_(std::move(worst_word)), worst_diff_(worst_diff) {}

  const std::string& worst_word() const { return worst_word_; }
  double worst_diff() const { return worst_diff_; }

 private:
  std::string worst_word_;
  double worst_diff_;
};

}  // namespace meixner
