// hilbert.hpp — basis bookkeeping for two three-level atoms coupled to one
// truncated cavity mode, plus the product <-> symmetric/antisymmetric
// (Bell-type) basis transform.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qjumps::hilbert {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Composite space: atom1 (3 levels) x atom2 (3 levels) x Fock mode
// truncated at n_max photons. Ordering is photon-major, so dropping the
// top Fock block is a contiguous truncation.
struct SpaceSpec {
    int n_max = 2;

    static constexpr int n_atoms = 2;
    static constexpr int levels_per_atom = 3;

    int dim() const {
        if (n_max < 0) throw std::invalid_argument("SpaceSpec: n_max must be >= 0");
        return 9 * (n_max + 1);
    }
};

struct BasisIndex {
    int j = 0;  // atom-1 level, 0..2
    int k = 0;  // atom-2 level, 0..2
    int n = 0;  // photon number, 0..n_max
};

inline int flat_index(const BasisIndex& b, const SpaceSpec& spec) {
    if (b.j < 0 || b.j > 2 || b.k < 0 || b.k > 2 || b.n < 0 || b.n > spec.n_max)
        throw std::out_of_range("flat_index: basis component out of range");
    return 9 * b.n + 3 * b.j + b.k;
}

inline BasisIndex unflatten(int idx, const SpaceSpec& spec) {
    if (idx < 0 || idx >= spec.dim())
        throw std::out_of_range("unflatten: index out of range");
    BasisIndex b;
    b.n = idx / 9;
    b.j = (idx % 9) / 3;
    b.k = idx % 3;
    return b;
}

// Atomic-sector ordering of the Bell-type basis inside each Fock block:
//   {|00>, |s01>, |a01>, |11>, |s02>, |a02>, |s12>, |a12>, |22>}
// so the effective 4-state model {00, s01, a01, 11} is the leading 4x4
// block of the n = 0 sector.
inline constexpr int kBellBlock = 9;

namespace detail {
// (j,k) pairs for the entangled states, ordered 01, 02, 12.
inline constexpr int kPairJ[3] = {0, 0, 1};
inline constexpr int kPairK[3] = {1, 2, 2};
}  // namespace detail

// Unitary U with rows = Bell-basis bras expressed in the product basis:
// psi_bell = U * psi_product, H_bell = U * H_product * U^dagger.
inline Mat bell_transform(const SpaceSpec& spec) {
    const int d = spec.dim();
    Mat u = Mat::Zero(d, d);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int n = 0; n <= spec.n_max; ++n) {
        const int base = 9 * n;
        auto prod = [&](int j, int k) { return flat_index({j, k, n}, spec); };
        // |00>, |s01>, |a01>, |11>
        u(base + 0, prod(0, 0)) = 1.0;
        u(base + 3, prod(1, 1)) = 1.0;
        u(base + 8, prod(2, 2)) = 1.0;
        // pairs: rows s01=1, a01=2, s02=4, a02=5, s12=6, a12=7
        const int sym_row[3] = {1, 4, 6};
        const int asym_row[3] = {2, 5, 7};
        for (int p = 0; p < 3; ++p) {
            const int j = detail::kPairJ[p], k = detail::kPairK[p];
            u(base + sym_row[p], prod(j, k)) = inv_sqrt2;
            u(base + sym_row[p], prod(k, j)) = inv_sqrt2;
            u(base + asym_row[p], prod(j, k)) = inv_sqrt2;
            u(base + asym_row[p], prod(k, j)) = -inv_sqrt2;
        }
    }
    return u;
}

// Atom-exchange operator X: |jk,n> -> |kj,n>.
inline Mat exchange_operator(const SpaceSpec& spec) {
    const int d = spec.dim();
    Mat x = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        BasisIndex b = unflatten(i, spec);
        x(flat_index({b.k, b.j, b.n}, spec), i) = 1.0;
    }
    return x;
}

// Flat index of a Bell-basis state within the Bell ordering above.
inline int bell_index(const std::string& atomic_label, int n, const SpaceSpec& spec) {
    if (n < 0 || n > spec.n_max)
        throw std::out_of_range("bell_index: photon number out of range");
    static const std::pair<const char*, int> table[] = {
        {"00", 0}, {"s01", 1}, {"a01", 2}, {"11", 3},
        {"s02", 4}, {"a02", 5}, {"s12", 6}, {"a12", 7}, {"22", 8},
    };
    for (const auto& [name, row] : table)
        if (atomic_label == name) return 9 * n + row;
    throw std::invalid_argument("bell_index: unknown label '" + atomic_label + "'");
}

// Normalized state vector in the *product* basis from a label of the form
// "jk" (product), "sjk" or "ajk" (symmetric/antisymmetric pair), with an
// optional ",n" photon-number suffix (default n = 0). Examples: "00",
// "a01", "s12,1".
inline Vec state_vector(const std::string& label, const SpaceSpec& spec) {
    std::string atomic = label;
    int n = 0;
    if (auto pos = label.find(','); pos != std::string::npos) {
        atomic = label.substr(0, pos);
        try {
            n = std::stoi(label.substr(pos + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("state_vector: bad photon number in '" + label + "'");
        }
    }
    if (n < 0 || n > spec.n_max)
        throw std::out_of_range("state_vector: photon number out of range in '" + label + "'");

    Vec v = Vec::Zero(spec.dim());
    auto digit = [&](char c) {
        if (c < '0' || c > '2')
            throw std::invalid_argument("state_vector: unknown label '" + label + "'");
        return c - '0';
    };
    if (atomic.size() == 2) {
        v(flat_index({digit(atomic[0]), digit(atomic[1]), n}, spec)) = 1.0;
    } else if (atomic.size() == 3 && (atomic[0] == 's' || atomic[0] == 'a')) {
        const int j = digit(atomic[1]), k = digit(atomic[2]);
        if (j == k) throw std::invalid_argument("state_vector: need j != k in '" + label + "'");
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        v(flat_index({j, k, n}, spec)) = inv_sqrt2;
        v(flat_index({k, j, n}, spec)) = (atomic[0] == 's') ? inv_sqrt2 : -inv_sqrt2;
    } else {
        throw std::invalid_argument("state_vector: unknown label '" + label + "'");
    }
    return v;
}

}  // namespace qjumps::hilbert
