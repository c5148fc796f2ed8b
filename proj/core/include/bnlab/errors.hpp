#pragma once

#include <stdexcept>
#include <string>

namespace bnlab {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public Error { public: using Error::Error; };
class NonFinite : public Error { public: using Error::Error; };
class StepUnderflow : public Error { public: using Error::Error; };
class NoBracket : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class Divergent : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class PrecisionLoss : public Error { public: using Error::Error; };
class InsufficientData : public Error { public: using Error::Error; };

// Carries the index of the last successfully computed grid point.
class BranchLost : public Error {
public:
  BranchLost(const std::string& what, int last_good)
      : Error(what), last_good_(last_good) {}
  int last_good() const noexcept { return last_good_; }

private:
  int last_good_;
};

} // namespace bnlab
