#ifndef FKDV_SYMBOL_HPP
#define FKDV_SYMBOL_HPP

namespace fkdv {

/// Even, real-valued Fourier multiplier beta(xi) of the dispersive operator.
/// Two variants: the fractional symbol |xi|^alpha and the extended Whitham
/// symbol sqrt(1 + gamma*xi^2) * sqrt(tanh(xi)/xi) with surface tension
/// parameter gamma >= 0 (gamma = 0 is the classical Whitham kernel).
class DispersionSymbol {
  public:
    enum class Kind { Fractional, WhithamExtended };

    static DispersionSymbol fractional(double alpha);
    static DispersionSymbol whitham_extended(double gamma);

    /// beta(|xi|); even in xi by construction.
    double operator()(double xi) const;

    Kind kind() const { return kind_; }
    bool is_fractional() const { return kind_ == Kind::Fractional; }
    double alpha() const { return param_; } // Fractional only
    double gamma() const { return param_; } // WhithamExtended only

  private:
    DispersionSymbol(Kind kind, double param) : kind_(kind), param_(param) {}

    Kind kind_;
    double param_;
};

} // namespace fkdv

#endif
