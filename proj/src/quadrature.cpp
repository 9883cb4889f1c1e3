#include "preint/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "preint/errors.hpp"

namespace preint {

namespace {

constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kKronrod[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
constexpr double kGauss[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kKronrod[7];
    double gauss = fc * kGauss[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kNodes[i];
        const double pair = f(c - dx) + f(c + dx);
        kronrod += kKronrod[i] * pair;
        if (i % 2 == 1) gauss += kGauss[i / 2] * pair;
    }
    const double value = kronrod * h;
    const double error = std::abs((kronrod - gauss) * h);
    if (!std::isfinite(value)) {
        throw EvaluationError("integrate_adaptive: non-finite integrand value");
    }
    return {a, b, value, error};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double abs_tol, int max_intervals) {
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw DomainError("integrate_adaptive: limits must be finite");
    }
    if (a == b) return {};
    const double sign = a < b ? 1.0 : -1.0;
    if (a > b) std::swap(a, b);

    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b);
    double total = first.value;
    double error = first.error;
    heap.push(first);
    int count = 1;
    while (error > abs_tol) {
        if (count >= max_intervals) {
            throw AccuracyError("integrate_adaptive: subdivision limit reached", sign * total,
                                error);
        }
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = gk15(f, worst.a, mid);
        const Segment right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error = std::max(0.0, error + left.error + right.error - worst.error);
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return {sign * total, error, count};
}

}  // namespace preint
