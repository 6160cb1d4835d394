#pragma once

#include <stdexcept>
#include <string>

namespace ite {

// Every failure raised by the library carries a stable machine-readable kind
// (used verbatim by the CLI on the diagnostic stream).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ITE_DECLARE_ERROR(Name)                                          \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(#Name, what) {}       \
  };

// specfun
ITE_DECLARE_ERROR(DomainError)
ITE_DECLARE_ERROR(OverflowError)

// media
ITE_DECLARE_ERROR(ConfigError)
ITE_DECLARE_ERROR(RegimeError)
ITE_DECLARE_ERROR(AlphaError)

// radial
ITE_DECLARE_ERROR(GeometryError)
ITE_DECLARE_ERROR(StiffnessError)
ITE_DECLARE_ERROR(CutoffUnverified)

// spectra
ITE_DECLARE_ERROR(ResolutionError)
ITE_DECLARE_ERROR(AccountingMismatch)
ITE_DECLARE_ERROR(InsufficientRange)

// planar
ITE_DECLARE_ERROR(IllConditioned)
ITE_DECLARE_ERROR(TrackingLost)

// report
ITE_DECLARE_ERROR(IoError)

#undef ITE_DECLARE_ERROR

enum class Operator { plain, a_n };

inline const char* to_string(Operator op) {
  return op == Operator::plain ? "plain" : "a_n";
}

// |gamma| below the hard gate. When the boundary-contrast hypothesis fails as
// well, regime_failed() is set so callers can report both conditions.
class GammaZeroError : public Error {
 public:
  GammaZeroError(const std::string& what, double gamma, bool regime_failed)
      : Error("GammaZeroError", what), gamma_(gamma), regime_failed_(regime_failed) {}
  double gamma() const noexcept { return gamma_; }
  bool regime_failed() const noexcept { return regime_failed_; }

 private:
  double gamma_;
  bool regime_failed_;
};

class PoleError : public Error {
 public:
  PoleError(const std::string& what, double pole, Operator op)
      : Error("PoleError", what), pole_(pole), op_(op) {}
  double pole() const noexcept { return pole_; }
  Operator op() const noexcept { return op_; }

 private:
  double pole_;
  Operator op_;
};

class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, double wavenumber, double residual,
                 Operator op = Operator::plain)
      : Error("ResonanceError", what), wavenumber_(wavenumber), residual_(residual), op_(op) {}
  double wavenumber() const noexcept { return wavenumber_; }
  double residual() const noexcept { return residual_; }
  Operator op() const noexcept { return op_; }

 private:
  double wavenumber_;
  double residual_;
  Operator op_;
};

}  // namespace ite
