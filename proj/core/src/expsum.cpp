#include "quadprime/expsum.hpp"

#include "quadprime/arith.hpp"
#include "quadprime/errors.hpp"
#include "quadprime/summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace quadprime::expsum {

namespace {

constexpr double kHalfSqrt2 = 0.70710678118654752440;

// e(j/8) for j = 0..7, exact to the last bit of the double constants.
constexpr std::array<Complex, 8> kEighths = {
    Complex{1.0, 0.0},         Complex{kHalfSqrt2, kHalfSqrt2},   Complex{0.0, 1.0},
    Complex{-kHalfSqrt2, kHalfSqrt2}, Complex{-1.0, 0.0},     Complex{-kHalfSqrt2, -kHalfSqrt2},
    Complex{0.0, -1.0},        Complex{kHalfSqrt2, -kHalfSqrt2}};

// theta mod 1 in [0, 1), in extended precision.
long double frac(long double theta) {
    long double f = theta - std::floor(theta);
    return f >= 1.0L ? 0.0L : f;
}

Complex e_of_reduced(long double f) {
    const long double eighth = f * 8.0L;
    if (eighth == std::floor(eighth))
        return kEighths[static_cast<std::size_t>(eighth) % 8];
    if (f >= 0.5L)
        f -= 1.0L;
    const long double angle = 2.0L * std::numbers::pi_v<long double> * f;
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

std::uint64_t reduce_mod(std::int64_t num, std::uint64_t den) {
    const auto d = static_cast<std::int64_t>(den);
    return static_cast<std::uint64_t>(((num % d) + d) % d);
}

void require_arc_modulus(const ArcPoint& arc, std::uint64_t ceiling) {
    arc.validate();
    if (arc.q > ceiling)
        throw std::invalid_argument("arc modulus " + std::to_string(arc.q) + " exceeds character-table ceiling");
}

}  // namespace

Complex e_of(double theta) { return e_of_reduced(frac(theta)); }

Complex e_rational(std::int64_t num, std::uint64_t den) {
    if (den == 0)
        throw std::invalid_argument("e_rational: zero denominator");
    const std::uint64_t r = reduce_mod(num, den);
    if ((8 * r) % den == 0)
        return kEighths[(8 * r) / den];
    return e_of_reduced(static_cast<long double>(r) / static_cast<long double>(den));
}

ArcPoint ArcPoint::make(std::uint64_t a, std::uint64_t q, double beta) {
    ArcPoint arc{a, q, beta};
    arc.validate();
    return arc;
}

void ArcPoint::validate() const {
    if (q == 0)
        throw std::invalid_argument("ArcPoint: q must be positive");
    if (a >= q)
        throw std::invalid_argument("ArcPoint: need 0 <= a < q");
    if (arith::gcd(a, q) != 1)
        throw std::invalid_argument("ArcPoint: gcd(a, q) must be 1");
    if (!std::isfinite(beta))
        throw std::invalid_argument("ArcPoint: beta must be finite");
}

Complex s1(double theta, std::uint64_t z, const sieve::LambdaTable& lambda) {
    if (z == 0)
        throw std::invalid_argument("s1: z must be positive");
    lambda.require_coverage(1, z);
    const long double f = frac(theta);
    CompensatedComplexSum sum;
    for (std::uint64_t m = 2; m <= z; ++m) {
        const double w = lambda(m);
        if (w != 0.0)
            sum += w * e_of_reduced(frac(f * static_cast<long double>(m)));
    }
    return sum.value();
}

Complex s1(const ArcPoint& arc, std::uint64_t z, const sieve::LambdaTable& lambda) {
    arc.validate();
    if (z == 0)
        throw std::invalid_argument("s1: z must be positive");
    lambda.require_coverage(1, z);
    CompensatedComplexSum sum;
    for (std::uint64_t m = 2; m <= z; ++m) {
        const double w = lambda(m);
        if (w != 0.0)
            sum += w * e_rational(static_cast<std::int64_t>(arith::mul_mod(arc.a, m, arc.q)), arc.q) *
                   e_of(arc.beta * static_cast<double>(m));
    }
    return sum.value();
}

Complex s2(double theta, std::uint64_t x) {
    const long double f = frac(theta);
    CompensatedComplexSum sum;
    for (std::uint64_t n = 1; n <= x; ++n) {
        const long double n2 = static_cast<long double>(n) * static_cast<long double>(n);
        sum += e_of_reduced(frac(-frac(f * n2)));
    }
    return sum.value();
}

Complex s2(const ArcPoint& arc, std::uint64_t x) {
    arc.validate();
    const long double beta = arc.beta;
    CompensatedComplexSum sum;
    for (std::uint64_t n = 1; n <= x; ++n) {
        const std::uint64_t r = arith::mul_mod(arc.a, arith::mul_mod(n, n, arc.q), arc.q);
        const long double n2 = static_cast<long double>(n) * static_cast<long double>(n);
        sum += e_rational(-static_cast<std::int64_t>(r), arc.q) * e_of_reduced(frac(-beta * n2));
    }
    return sum.value();
}

Complex g_quadratic(std::int64_t a, std::uint64_t q) {
    if (q == 0)
        throw std::invalid_argument("g_quadratic: q must be positive");
    const std::uint64_t ar = reduce_mod(a, q);
    if (arith::gcd(ar, q) != 1)
        throw std::invalid_argument("g_quadratic: gcd(a, q) must be 1");
    CompensatedComplexSum sum;
    for (std::uint64_t l = 1; l <= q; ++l) {
        if (arith::gcd(l, q) != 1)
            continue;
        const std::uint64_t r = arith::mul_mod(ar, arith::mul_mod(l, l, q), q);
        sum += e_rational(-static_cast<std::int64_t>(r), q);
    }
    return sum.value();
}

S2Decomposition decompose_s2(const ArcPoint& arc, std::uint64_t x, std::uint64_t ceiling) {
    require_arc_modulus(arc, ceiling);
    const std::uint64_t q = arc.q;

    // e(-beta n^2) for every n <= x, shared by all divisor classes.
    std::vector<Complex> twist(x + 1);
    for (std::uint64_t n = 1; n <= x; ++n) {
        const long double n2 = static_cast<long double>(n) * static_cast<long double>(n);
        twist[n] = e_of_reduced(frac(-static_cast<long double>(arc.beta) * n2));
    }

    CompensatedComplexSum t2, e2;
    for (const std::uint64_t d : arith::divisors(q)) {
        const std::uint64_t q_star = q / d;
        const std::uint64_t g = arith::gcd(d, q_star);
        const std::uint64_t d_star = d / g;
        const std::uint64_t q1 = q_star / g;
        const double inv_phi = 1.0 / static_cast<double>(arith::mobius_phi(q1).phi);

        // n <= x with gcd(n, q) = d are n = d n*, gcd(n*, q*) = 1.
        CompensatedComplexSum plain;
        for (std::uint64_t n = d; n <= x; n += d) {
            if (arith::gcd(n / d, q_star) == 1)
                plain += twist[n];
        }
        const auto ad = static_cast<std::int64_t>(arith::mul_mod(arc.a % q1, d_star % q1, q1));
        t2 += inv_phi * g_quadratic(ad, q1) * plain.value();

        if (q1 <= 2)
            continue;  // every character mod 1 or 2 is real
        const auto table = characters::build_character_table(q1, ceiling);
        for (const auto& chi : table) {
            if (chi.is_real())
                continue;
            CompensatedComplexSum inner;
            for (std::uint64_t n = d; n <= x; n += d) {
                const std::uint64_t n_star = n / d;
                if (arith::gcd(n_star, q_star) != 1)
                    continue;
                const Complex c = chi(static_cast<std::int64_t>(n_star));
                inner += c * c * twist[n];
            }
            e2 += inv_phi * characters::gauss_sum_conj(chi) * chi(-ad) * inner.value();
        }
    }
    return {t2.value(), e2.value()};
}

S1Decomposition decompose_s1(const ArcPoint& arc, std::uint64_t z, const sieve::LambdaTable& lambda,
                             std::uint64_t ceiling) {
    require_arc_modulus(arc, ceiling);
    if (z == 0)
        throw std::invalid_argument("decompose_s1: z must be positive");
    lambda.require_coverage(1, z);
    const std::uint64_t q = arc.q;
    const auto [mu, phi] = arith::mobius_phi(q);
    const double inv_phi = 1.0 / static_cast<double>(phi);

    std::vector<Complex> twist(z + 1);
    for (std::uint64_t m = 1; m <= z; ++m)
        twist[m] = e_of(arc.beta * static_cast<double>(m));

    CompensatedComplexSum geometric, remainder;
    for (std::uint64_t m = 1; m <= z; ++m) {
        geometric += twist[m];
        if (arith::gcd(m, q) > 1 && lambda(m) != 0.0)
            remainder += lambda(m) *
                         e_rational(static_cast<std::int64_t>(arith::mul_mod(arc.a, m, q)), q) * twist[m];
    }

    // Principal term: chi_0(m) Lambda(m) is recentred to chi_0(m) Lambda(m) - 1.
    const auto table = characters::build_character_table(q, ceiling);
    CompensatedComplexSum e1;
    for (const auto& chi : table) {
        CompensatedComplexSum inner;
        for (std::uint64_t m = 1; m <= z; ++m) {
            const Complex c = chi(static_cast<std::int64_t>(m));
            Complex term = c * lambda(m);
            if (chi.is_principal())
                term -= 1.0;
            inner += term * twist[m];
        }
        e1 += characters::gauss_sum_conj(chi) * chi(static_cast<std::int64_t>(arc.a)) * inner.value();
    }
    return {static_cast<double>(mu) * inv_phi * geometric.value(), inv_phi * e1.value(), remainder.value()};
}

double circle_psi_oracle(std::uint64_t x, std::uint64_t k, std::uint64_t y, const sieve::LambdaTable& lambda,
                         std::uint64_t max_samples) {
    if (x == 0 || k == 0 || y == 0)
        throw std::invalid_argument("circle_psi_oracle: x, k, y must be positive");
    if (k > y)
        throw std::invalid_argument("circle_psi_oracle: need k <= y so that n^2 + k <= z");
    const std::uint64_t z = x * x + y;
    lambda.require_coverage(1, z);
    std::uint64_t samples = 1;
    while (samples <= z + x * x + y)
        samples *= 2;
    if (samples > max_samples)
        throw BudgetError("circle_psi_oracle: " + std::to_string(samples) + " samples exceed the budget of " +
                          std::to_string(max_samples));

    std::vector<Complex> roots(samples);
    for (std::uint64_t j = 0; j < samples; ++j)
        roots[j] = e_rational(static_cast<std::int64_t>(j), samples);
    const std::uint64_t mask = samples - 1;

    std::vector<std::uint64_t> support;
    for (std::uint64_t m = 2; m <= z; ++m) {
        if (lambda(m) != 0.0)
            support.push_back(m);
    }

    CompensatedComplexSum integral;
    for (std::uint64_t j = 0; j < samples; ++j) {
        Complex sum1{0.0, 0.0};
        for (const std::uint64_t m : support)
            sum1 += lambda(m) * roots[(j * m) & mask];
        Complex sum2{0.0, 0.0};
        for (std::uint64_t n = 1; n <= x; ++n)
            sum2 += std::conj(roots[(j * (n * n + k)) & mask]);
        integral += sum1 * sum2;
    }
    const Complex value = integral.value() / static_cast<double>(samples);
    if (std::fabs(value.imag()) > 1e-6)
        throw std::runtime_error("circle_psi_oracle: imaginary part " + std::to_string(value.imag()) +
                                 " does not vanish");
    return value.real();
}

double weyl_ratio(const ArcPoint& arc, std::uint64_t x) {
    arc.validate();
    if (x < 2)
        throw std::invalid_argument("weyl_ratio: x must be at least 2");
    const double q = static_cast<double>(arc.q);
    if (std::fabs(arc.beta) > 1.0 / (q * q))
        throw std::invalid_argument("weyl_ratio: |beta| must not exceed 1/q^2");
    const double xd = static_cast<double>(x);
    return std::abs(s2(arc, x)) / (std::log(xd) * (xd / std::sqrt(q) + std::sqrt(q * xd)));
}

double weyl_grid_max(std::uint64_t seed) {
    // Raw engine output only, so the grid is identical on every platform.
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (const std::uint64_t x : {100ULL, 1000ULL, 10000ULL}) {
        for (int i = 0; i < 50; ++i) {
            const std::uint64_t q = 1 + rng() % x;
            std::uint64_t a = q == 1 ? 0 : rng() % q;
            while (arith::gcd(a, q) != 1)
                a = (a + 1) % q;
            const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
            const double qd = static_cast<double>(q);
            const double beta = (2.0 * unit - 1.0) / (qd * qd);
            worst = std::max(worst, weyl_ratio(ArcPoint::make(a, q, beta), x));
        }
    }
    return worst;
}

PvReport pv_check(std::uint64_t q, std::uint64_t ceiling) {
    if (q < 2)
        throw std::invalid_argument("pv_check: q must be at least 2");
    const auto table = characters::build_character_table(q, ceiling);
    const double qd = static_cast<double>(q);
    const double bound = 6.0 * std::sqrt(qd) * std::log(qd);

    // Window sums are differences of the (q-periodic) prefix sums, so the
    // largest one is the diameter of the prefix-sum point set.
    double worst_sq = 0.0;
    std::vector<Complex> points(q);
    std::vector<Complex> hull;
    for (const auto& chi : table) {
        if (chi.is_principal())
            continue;
        Complex running{0.0, 0.0};
        for (std::uint64_t n = 0; n < q; ++n) {
            points[n] = running;
            running += chi(static_cast<std::int64_t>(n + 1));
        }
        std::vector<Complex> sorted(points);
        std::sort(sorted.begin(), sorted.end(), [](const Complex& u, const Complex& v) {
            return u.real() < v.real() || (u.real() == v.real() && u.imag() < v.imag());
        });
        auto cross = [](const Complex& o, const Complex& u, const Complex& v) {
            return (u.real() - o.real()) * (v.imag() - o.imag()) - (u.imag() - o.imag()) * (v.real() - o.real());
        };
        hull.assign(2 * sorted.size(), Complex{});
        std::size_t h = 0;
        for (const auto& pt : sorted) {
            while (h >= 2 && cross(hull[h - 2], hull[h - 1], pt) <= 0)
                --h;
            hull[h++] = pt;
        }
        for (std::size_t i = sorted.size() - 1, lower = h + 1; i-- > 0;) {
            const auto& pt = sorted[i];
            while (h >= lower && cross(hull[h - 2], hull[h - 1], pt) <= 0)
                --h;
            hull[h++] = pt;
        }
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = i + 1; j < h; ++j)
                worst_sq = std::max(worst_sq, std::norm(hull[i] - hull[j]));
    }
    const double worst = std::sqrt(worst_sq);
    return {worst, bound, worst <= bound};
}

}  // namespace quadprime::expsum
