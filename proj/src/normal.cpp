#include "preint/normal.hpp"

#include <cmath>
#include <numbers>

#include "preint/errors.hpp"

namespace preint::normal {

double pdf(double y) noexcept {
    return kInvSqrt2Pi * std::exp(-0.5 * y * y);
}

// erfc keeps full relative accuracy in the lower tail, so no series is
// needed for large |y|.
double cdf(double y) noexcept {
    if (std::isinf(y)) return y > 0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-y / std::numbers::sqrt2);
}

double ccdf(double y) noexcept {
    return cdf(-y);
}

double mass(double a, double b) noexcept {
    if (!(a < b)) return 0.0;
    if (a >= 0.0) return ccdf(a) - ccdf(b);
    if (b <= 0.0) return cdf(b) - cdf(a);
    return 1.0 - cdf(a) - ccdf(b);
}

namespace {

// Wichura, Algorithm AS 241 (PPND16), about 1e-16 relative accuracy.
double ppnd16(double p) {
    constexpr double split1 = 0.425;
    constexpr double split2 = 5.0;
    constexpr double const1 = 0.180625;
    constexpr double const2 = 1.6;

    constexpr double a[] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                            1.9715909503065514427e+3, 1.3731693765509461125e+4,
                            4.5921953931549871457e+4, 6.7265770927008700853e+4,
                            3.3430575583588128105e+4, 2.5090809287301226727e+3};
    constexpr double b[] = {1.0, 4.2313330701600911252e+1,
                            6.8718700749205790830e+2, 5.3941960214247511077e+3,
                            2.1213794301586595867e+4, 3.9307895800092710610e+4,
                            2.8729085735721942674e+4, 5.2264952788528545610e+3};
    constexpr double c[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                            5.76949722146069140550e0, 3.64784832476320460504e0,
                            1.27045825245236838258e0, 2.41780725177450611770e-1,
                            2.27238449892691845833e-2, 7.74545014278341407640e-4};
    constexpr double d[] = {1.0, 2.05319162663775882187e0,
                            1.67638483018380384940e0, 6.89767334985100004550e-1,
                            1.48103976427480074590e-1, 1.51986665636164571966e-2,
                            5.47593808499534494600e-4, 1.05075007164441684324e-9};
    constexpr double e[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                            1.78482653991729133580e0, 2.96560571828504891230e-1,
                            2.65321895265761230930e-2, 1.24266094738807843860e-3,
                            2.71155556874348757815e-5, 2.01033439929228813265e-7};
    constexpr double f[] = {1.0, 5.99832206555887937690e-1,
                            1.36929880922735805310e-1, 1.48753612908506148525e-2,
                            7.86869131145613259100e-4, 1.84631831751005468180e-5,
                            1.42151175831644588870e-7, 2.04426310338993978564e-15};

    auto poly = [](const double* k, double x) {
        double s = k[7];
        for (int i = 6; i >= 0; --i) s = s * x + k[i];
        return s;
    };

    const double q = p - 0.5;
    if (std::abs(q) <= split1) {
        const double r = const1 - q * q;
        return q * poly(a, r) / poly(b, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= split2) {
        r -= const2;
        x = poly(c, r) / poly(d, r);
    } else {
        r -= split2;
        x = poly(e, r) / poly(f, r);
    }
    return q < 0.0 ? -x : x;
}

}  // namespace

double inv_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("inv_cdf: probability must lie in (0, 1)");
    }
    double x = ppnd16(p);
    // One Halley step on the tail that is accurately representable.
    const double err = p < 0.5 ? cdf(x) - p : (1.0 - p) - ccdf(x);
    const double dens = pdf(x);
    if (dens > 0.0) {
        const double u = err / dens;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

}  // namespace preint::normal
