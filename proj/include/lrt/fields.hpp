#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "lrt/axis.hpp"
#include "lrt/interp.hpp"
#include "lrt/vec.hpp"

namespace lrt {

using cplx = std::complex<double>;

enum class InterpMode { linear, cubic };

// Fields come in two backings. Grid fields interpolate node values (bilinear
// for anything that feeds matrix assembly, prefiltered cubic for forward-only
// evaluation) and are exactly 0.0 outside their bounding box. Callback fields
// evaluate a user function; tests use them to take discretization of the
// field itself out of the error budget.

class ScalarField2 {
  public:
    ScalarField2() = default;
    static ScalarField2 grid(Axis x, Axis y, std::vector<double> v,
                             InterpMode m = InterpMode::linear);
    static ScalarField2 callback(std::function<double(Vec2)> f);

    double operator()(Vec2 p) const;

    bool is_grid() const { return !v_.empty(); }
    const Axis& ax() const { return ax_; }
    const Axis& ay() const { return ay_; }
    const std::vector<double>& values() const { return v_; }
    double& node(int i, int j) { return v_[std::size_t(i) * ay_.n + j]; }
    double node(int i, int j) const { return v_[std::size_t(i) * ay_.n + j]; }

  private:
    Axis ax_, ay_;
    std::vector<double> v_;
    InterpMode mode_ = InterpMode::linear;
    std::shared_ptr<const Spline2> spl_;
    std::function<double(Vec2)> fn_;
};

class CScalarField2 {
  public:
    CScalarField2() = default;
    static CScalarField2 grid(Axis x, Axis y, std::vector<cplx> v,
                              InterpMode m = InterpMode::linear);
    static CScalarField2 callback(std::function<cplx(Vec2)> f);

    cplx operator()(Vec2 p) const;

    bool is_grid() const { return !v_.empty(); }
    const Axis& ax() const { return ax_; }
    const Axis& ay() const { return ay_; }
    const std::vector<cplx>& values() const { return v_; }
    cplx& node(int i, int j) { return v_[std::size_t(i) * ay_.n + j]; }

  private:
    Axis ax_, ay_;
    std::vector<cplx> v_;
    InterpMode mode_ = InterpMode::linear;
    std::shared_ptr<const Spline2> re_, im_;
    std::function<cplx(Vec2)> fn_;
};

// Space-time scalar on (0,T) x box. Time support window gives exact-zero
// evaluation outside [t_supp_lo, t_supp_hi]; for grid fields it is tightened
// automatically to the nonzero t-slices so that the light transform vanishes
// identically where the support argument says it must.
class STScalar {
  public:
    STScalar() = default;
    static STScalar grid(Axis t, Axis x, Axis y, std::vector<double> v,
                         InterpMode m = InterpMode::linear);
    static STScalar callback(std::function<double(double, Vec2)> f, double t_supp_lo,
                             double t_supp_hi);

    double value(double t, Vec2 p) const;

    bool is_grid() const { return !v_.empty(); }
    const Axis& at() const { return at_; }
    const Axis& ax() const { return ax_; }
    const Axis& ay() const { return ay_; }
    const std::vector<double>& values() const { return v_; }
    double& node(int k, int i, int j) {
        return v_[(std::size_t(k) * ax_.n + i) * ay_.n + j];
    }
    double node(int k, int i, int j) const {
        return v_[(std::size_t(k) * ax_.n + i) * ay_.n + j];
    }
    double t_supp_lo() const { return t_supp_lo_; }
    double t_supp_hi() const { return t_supp_hi_; }

  private:
    Axis at_, ax_, ay_;
    std::vector<double> v_;
    InterpMode mode_ = InterpMode::linear;
    std::shared_ptr<const Spline3> spl_;
    std::function<double(double, Vec2)> fn_;
    double t_supp_lo_ = 0.0, t_supp_hi_ = 0.0;
    void tighten_support();
};

class CSTScalar {
  public:
    CSTScalar() = default;
    static CSTScalar grid(Axis t, Axis x, Axis y, std::vector<cplx> v,
                          InterpMode m = InterpMode::linear);
    static CSTScalar callback(std::function<cplx(double, Vec2)> f, double t_supp_lo,
                              double t_supp_hi);

    cplx value(double t, Vec2 p) const;

    bool is_grid() const { return !v_.empty(); }
    const Axis& at() const { return at_; }
    const Axis& ax() const { return ax_; }
    const Axis& ay() const { return ay_; }
    const std::vector<cplx>& values() const { return v_; }
    cplx& node(int k, int i, int j) { return v_[(std::size_t(k) * ax_.n + i) * ay_.n + j]; }
    double t_supp_lo() const { return t_supp_lo_; }
    double t_supp_hi() const { return t_supp_hi_; }

  private:
    Axis at_, ax_, ay_;
    std::vector<cplx> v_;
    InterpMode mode_ = InterpMode::linear;
    std::shared_ptr<const Spline3> re_, im_;
    std::function<cplx(double, Vec2)> fn_;
    double t_supp_lo_ = 0.0, t_supp_hi_ = 0.0;
    void tighten_support();
};

// Space-time one-form B = b dt + a1 dx1 + a2 dx2.
struct OneFormVal {
    double b = 0.0;
    Vec2 a{};
};

class STOneForm {
  public:
    STOneForm() = default;
    static STOneForm grid(Axis t, Axis x, Axis y, std::vector<double> b, std::vector<double> a1,
                          std::vector<double> a2, InterpMode m = InterpMode::linear);
    static STOneForm callback(std::function<OneFormVal(double, Vec2)> f, double t_supp_lo,
                              double t_supp_hi);

    OneFormVal value(double t, Vec2 p) const;

    bool is_grid() const { return b_.is_grid(); }
    const STScalar& b() const { return b_; }
    const STScalar& a1() const { return a1_; }
    const STScalar& a2() const { return a2_; }
    double t_supp_lo() const;
    double t_supp_hi() const;

  private:
    STScalar b_, a1_, a2_;
    std::function<OneFormVal(double, Vec2)> fn_;
    double cb_lo_ = 0.0, cb_hi_ = 0.0;
    bool is_cb_ = false;
};

// max |values| helpers used all over the tests
double max_abs(const std::vector<double>& v);
double max_abs(const std::vector<cplx>& v);

}  // namespace lrt
