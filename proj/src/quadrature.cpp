#include "blx/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace blx {

namespace {

// Kronrod-15 abscissae/weights on [-1, 1] and embedded Gauss-7 weights.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

}  // namespace

QuadResult gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double res_g = fc * wg[3];
    double res_k = fc * wgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = h * xgk[j];
        double fsum = f(c - x) + f(c + x);
        res_k += wgk[j] * fsum;
        if (j % 2 == 1) res_g += wg[j / 2] * fsum;
    }
    QuadResult r;
    r.value = res_k * h;
    r.abs_error = std::abs((res_k - res_g) * h);
    r.evals = 15;
    return r;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              double rel_tol, double abs_tol, int max_depth) {
    struct Panel {
        double a, b, value, error;
        int depth;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    QuadResult first = gk15(f, a, b);
    std::priority_queue<Panel> heap;
    heap.push({a, b, first.value, first.abs_error, 0});
    double total = first.value, err = first.abs_error;
    long evals = 15;
    bool depth_hit = false;
    while (err > std::max(rel_tol * std::abs(total), abs_tol)) {
        Panel p = heap.top();
        if (p.depth >= max_depth) {
            depth_hit = true;
            break;
        }
        heap.pop();
        double m = 0.5 * (p.a + p.b);
        QuadResult l = gk15(f, p.a, m), r = gk15(f, m, p.b);
        evals += 30;
        total += l.value + r.value - p.value;
        err += l.abs_error + r.abs_error - p.error;
        heap.push({p.a, m, l.value, l.abs_error, p.depth + 1});
        heap.push({m, p.b, r.value, r.abs_error, p.depth + 1});
    }
    QuadResult out;
    out.value = total;
    out.abs_error = err;
    out.evals = evals;
    out.converged = !depth_hit;
    return out;
}

QuadResult integrate_exp_tail(const Integrand& f, double a, double rate,
                              double rel_tol, double abs_tol) {
    if (!(rate > 0.0))
        throw std::invalid_argument("integrate_exp_tail: rate must be > 0");
    QuadResult out;
    double lo = a;
    for (int panel = 0; panel < 200; ++panel) {
        double hi = 2.0 * lo;
        QuadResult p = integrate_adaptive(f, lo, hi, rel_tol, abs_tol, 30);
        out.value += p.value;
        out.abs_error += p.abs_error;
        out.evals += p.evals;
        double fb = std::abs(f(hi));
        out.evals += 1;
        double remainder = 2.0 * fb * (1.0 + 1.0 / (rate * hi)) / rate;
        if (remainder < std::max(abs_tol, rel_tol * std::abs(out.value)) &&
            rate * hi > 3.0) {
            out.abs_error += remainder;
            return out;
        }
        lo = hi;
    }
    out.converged = false;
    return out;
}

}  // namespace blx
