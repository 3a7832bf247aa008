#include "quadprime/characters.hpp"

#include "quadprime/arith.hpp"
#include "quadprime/errors.hpp"
#include "quadprime/expsum.hpp"
#include "quadprime/summation.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace quadprime::characters {

namespace {

// One cyclic factor of (Z/qZ)*: the exponent of n mod `modulus` with
// respect to a fixed generator, or -1 for non-units.
struct CyclicFactor {
    std::uint64_t modulus;
    std::uint64_t order;
    std::vector<std::int64_t> dlog;
};

std::uint64_t primitive_root_mod_prime(std::uint64_t p) {
    if (p == 2)
        return 1;
    const auto factors = arith::factorize(p - 1);
    for (std::uint64_t g = 2;; ++g) {
        bool ok = true;
        for (const auto& f : factors) {
            if (arith::pow_mod(g, (p - 1) / f.prime, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok)
            return g;
    }
}

CyclicFactor cyclic_factor(std::uint64_t modulus, std::uint64_t generator, std::uint64_t order) {
    CyclicFactor f{modulus, order, std::vector<std::int64_t>(modulus, -1)};
    std::uint64_t cur = 1 % modulus;
    for (std::uint64_t t = 0; t < order; ++t) {
        f.dlog[cur] = static_cast<std::int64_t>(t);
        cur = arith::mul_mod(cur, generator, modulus);
    }
    return f;
}

// Factors for an odd prime power: cyclic, generated by a lifted primitive root.
CyclicFactor odd_prime_power_factor(std::uint64_t p, unsigned e) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i)
        pe *= p;
    std::uint64_t g = primitive_root_mod_prime(p);
    if (e >= 2 && arith::pow_mod(g, p - 1, p * p) == 1)
        g += p;
    return cyclic_factor(pe, g, pe / p * (p - 1));
}

// (Z/2^e)* = {+-1} x <5> for e >= 3, {+-1} for e = 2, trivial for e = 1.
std::vector<CyclicFactor> two_power_factors(unsigned e) {
    std::vector<CyclicFactor> out;
    if (e == 1)
        return out;
    const std::uint64_t m = std::uint64_t{1} << e;
    CyclicFactor sign{m, 2, std::vector<std::int64_t>(m, -1)};
    for (std::uint64_t n = 1; n < m; n += 2)
        sign.dlog[n] = (n % 4 == 3) ? 1 : 0;
    out.push_back(std::move(sign));
    if (e >= 3) {
        const CyclicFactor five = cyclic_factor(m, 5, m / 4);
        CyclicFactor rest{m, m / 4, std::vector<std::int64_t>(m, -1)};
        for (std::uint64_t n = 1; n < m; n += 2)
            rest.dlog[n] = five.dlog[n % 4 == 3 ? m - n : n];
        out.push_back(std::move(rest));
    }
    return out;
}

}  // namespace

Character::Character(std::uint64_t modulus, std::uint64_t exponent, std::vector<std::int64_t> phases,
                     std::uint64_t order, const std::vector<Complex>& roots)
    : modulus_(modulus), exponent_(exponent), phases_(std::move(phases)), order_(order) {
    values_.assign(modulus_, Complex{0.0, 0.0});
    for (std::size_t n = 0; n < modulus_; ++n) {
        if (phases_[n] >= 0)
            values_[n] = roots[static_cast<std::size_t>(phases_[n])];
    }
    conductor_ = compute_conductor();
}

std::uint64_t Character::compute_conductor() const {
    for (const std::uint64_t d : arith::divisors(modulus_)) {
        if (d == modulus_)
            break;
        bool induced = true;
        for (std::uint64_t n = 1 % d; n < modulus_ && induced; n += d) {
            if (phases_[n] > 0)
                induced = false;
        }
        if (induced)
            return d;
    }
    return modulus_;
}

CharacterTable build_character_table(std::uint64_t q, std::uint64_t ceiling) {
    if (q == 0)
        throw std::invalid_argument("build_character_table: modulus must be positive");
    if (q > ceiling)
        throw std::invalid_argument("build_character_table: modulus " + std::to_string(q) + " exceeds ceiling " +
                                    std::to_string(ceiling));

    std::vector<CyclicFactor> factors;
    for (const auto& [p, e] : arith::factorize(q)) {
        if (p == 2) {
            for (auto& f : two_power_factors(e))
                factors.push_back(std::move(f));
        } else {
            factors.push_back(odd_prime_power_factor(p, e));
        }
    }

    std::uint64_t exponent = 1;
    for (const auto& f : factors)
        exponent = std::lcm(exponent, f.order);
    std::vector<Complex> roots(exponent);
    for (std::uint64_t s = 0; s < exponent; ++s)
        roots[s] = expsum::e_rational(static_cast<std::int64_t>(s), exponent);

    // Per-residue discrete logs in every factor, scaled to the common exponent.
    std::vector<std::vector<std::int64_t>> scaled(factors.size(), std::vector<std::int64_t>(q, -1));
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i];
        const auto scale = static_cast<std::int64_t>(exponent / f.order);
        for (std::uint64_t n = 0; n < q; ++n) {
            if (arith::gcd(n, q) != 1)
                continue;
            scaled[i][n] = f.dlog[n % f.modulus] * scale;
        }
    }

    std::uint64_t count = 1;
    for (const auto& f : factors)
        count *= f.order;

    std::vector<Character> chars;
    chars.reserve(count);
    std::vector<std::uint64_t> index(factors.size(), 0);
    for (std::uint64_t c = 0; c < count; ++c) {
        std::vector<std::int64_t> phases(q, -1);
        for (std::uint64_t n = 0; n < q; ++n) {
            if (arith::gcd(n, q) != 1)
                continue;
            std::int64_t s = 0;
            for (std::size_t i = 0; i < factors.size(); ++i)
                s = (s + static_cast<std::int64_t>(index[i]) * scaled[i][n]) % static_cast<std::int64_t>(exponent);
            phases[n] = s;
        }
        std::uint64_t order = 1;
        for (std::size_t i = 0; i < factors.size(); ++i)
            order = std::lcm(order, factors[i].order / std::gcd(factors[i].order, index[i]));
        chars.emplace_back(q, exponent, std::move(phases), order, roots);

        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (++index[i] < factors[i].order)
                break;
            index[i] = 0;
        }
    }
    return CharacterTable(q, std::move(chars));
}

Complex gauss_sum(const Character& chi) {
    CompensatedComplexSum sum;
    const std::uint64_t q = chi.modulus();
    for (std::uint64_t n = 1; n <= q; ++n)
        sum += chi(static_cast<std::int64_t>(n)) * expsum::e_rational(static_cast<std::int64_t>(n), q);
    return sum.value();
}

Complex gauss_sum_conj(const Character& chi) {
    CompensatedComplexSum sum;
    const std::uint64_t q = chi.modulus();
    for (std::uint64_t n = 1; n <= q; ++n)
        sum += std::conj(chi(static_cast<std::int64_t>(n))) * expsum::e_rational(static_cast<std::int64_t>(n), q);
    return sum.value();
}

}  // namespace quadprime::characters
