#include "alc/quadrature.hpp"

#include <cmath>

namespace alc {

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    bool ok = true;
};

double simpson(double fa, double fm, double fb, double h6) {
    return h6 * (fa + 4.0 * fm + fb);
}

double adapt(SimpsonState& st, double a, double b, double fa, double fm,
             double fb, double whole, double tol, int depth, int force) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = st.f(lm);
    double frm = st.f(rm);
    double left = simpson(fa, flm, fm, (m - a) / 6.0);
    double right = simpson(fm, frm, fb, (b - m) / 6.0);
    double err = left + right - whole;
    if (force <= 0 && std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    if (depth <= 0) {
        st.ok = false;
        return left + right;
    }
    return adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
           adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

constexpr double kG5x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                            0.5384693101056831, 0.9061798459386640};
constexpr double kG5w[5] = {0.2369268850561891, 0.4786286704993665,
                            0.5688888888888889, 0.4786286704993665,
                            0.2369268850561891};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth, int min_depth) {
    if (!(tol > 0.0)) throw QuadratureError("integrate: tolerance must be positive");
    if (a == b) return 0.0;
    SimpsonState st{f};
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = simpson(fa, fm, fb, (b - a) / 6.0);
    double val = adapt(st, a, b, fa, fm, fb, whole, tol, max_depth, min_depth);
    if (!st.ok) throw QuadratureError("integrate: tolerance not reached at maximum refinement");
    return val;
}

double gauss5(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += kG5w[i] * f(c + h * kG5x[i]);
    return s * h;
}

double gauss5_composite(const std::function<double(double)>& f, double a,
                        double b, double max_step) {
    double len = b - a;
    if (len == 0.0) return 0.0;
    int n = static_cast<int>(std::ceil(std::abs(len) / max_step));
    if (n < 1) n = 1;
    double h = len / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += gauss5(f, a + i * h, a + (i + 1) * h);
    return s;
}

}  // namespace alc
