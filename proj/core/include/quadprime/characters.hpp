#pragma once

// Dirichlet characters as explicit value tables, built from the structure
// of the unit group (Z/qZ)*.

#include <complex>
#include <cstdint>
#include <vector>

namespace quadprime::characters {

using Complex = std::complex<double>;

inline constexpr std::uint64_t kDefaultModulusCeiling = 10'000;

class Character {
public:
    /// roots[s] = e(s / exponent) for 0 <= s < exponent.
    Character(std::uint64_t modulus, std::uint64_t exponent, std::vector<std::int64_t> phases, std::uint64_t order,
              const std::vector<Complex>& roots);

    std::uint64_t modulus() const noexcept { return modulus_; }

    /// chi(n) for any integer n; 0 when gcd(n, q) > 1.
    Complex operator()(std::int64_t n) const noexcept { return values_[reduce(n)]; }

    /// chi(n) = e(phase(n) / exponent) on units, phase(n) = -1 off units.
    std::int64_t phase(std::int64_t n) const noexcept { return phases_[reduce(n)]; }
    std::uint64_t exponent() const noexcept { return exponent_; }

    const std::vector<Complex>& values() const noexcept { return values_; }

    std::uint64_t order() const noexcept { return order_; }
    bool is_principal() const noexcept { return order_ == 1; }
    bool is_real() const noexcept { return order_ <= 2; }

    /// Smallest d | q such that chi is induced by a character mod d.
    std::uint64_t conductor() const noexcept { return conductor_; }
    bool is_primitive() const noexcept { return conductor_ == modulus_; }

private:
    std::size_t reduce(std::int64_t n) const noexcept {
        const auto q = static_cast<std::int64_t>(modulus_);
        return static_cast<std::size_t>(((n % q) + q) % q);
    }
    std::uint64_t compute_conductor() const;

    std::uint64_t modulus_;
    std::uint64_t exponent_;
    std::vector<std::int64_t> phases_;
    std::vector<Complex> values_;
    std::uint64_t order_;
    std::uint64_t conductor_;
};

class CharacterTable {
public:
    CharacterTable(std::uint64_t modulus, std::vector<Character> characters)
        : modulus_(modulus), characters_(std::move(characters)) {}

    std::uint64_t modulus() const noexcept { return modulus_; }
    std::size_t size() const noexcept { return characters_.size(); }
    const Character& operator[](std::size_t i) const noexcept { return characters_[i]; }
    const Character& principal() const noexcept { return characters_[principal_index()]; }
    static constexpr std::size_t principal_index() noexcept { return 0; }

    auto begin() const noexcept { return characters_.begin(); }
    auto end() const noexcept { return characters_.end(); }

private:
    std::uint64_t modulus_;
    std::vector<Character> characters_;
};

/// All phi(q) characters mod q, principal first. Throws std::invalid_argument
/// for q = 0 or q > ceiling.
CharacterTable build_character_table(std::uint64_t q, std::uint64_t ceiling = kDefaultModulusCeiling);

/// tau(chi) = sum_{n=1}^q chi(n) e(n/q).
Complex gauss_sum(const Character& chi);

/// tau(conj chi).
Complex gauss_sum_conj(const Character& chi);

}  // namespace quadprime::characters
