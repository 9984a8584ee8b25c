// Copyright 2026 The qec832 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qec832 {

inline constexpr std::size_t kMaxQubits = 16;

/// Bit q refers to qubit q.
using QubitMask = std::uint32_t;

inline int popcount(QubitMask m) { return std::popcount(m); }

inline QubitMask mask_of(std::initializer_list<std::size_t> qubits) {
    QubitMask m = 0;
    for (auto q : qubits) {
        m |= QubitMask{1} << q;
    }
    return m;
}

/// An n-qubit Pauli operator stored as i^k X^x Z^z.
///
/// The X factors act first in the product, so a Y on qubit q is the pair of
/// set bits together with one extra factor of i (Y = iXZ). The textual form
/// uses a phase prefix (`+`, `-`, `+i`, `-i`) followed by one of I/X/Y/Z per
/// qubit, qubit 0 leftmost. `+ZIIIZIII` is Z0 Z4.
class PauliOperator {
   public:
    PauliOperator(std::size_t width, QubitMask x = 0, QubitMask z = 0, std::uint8_t phase = 0)
        : width_(static_cast<std::uint8_t>(width)), x_(x), z_(z), phase_(phase & 3) {
        if (width == 0 || width > kMaxQubits) {
            throw std::invalid_argument("PauliOperator width must be in 1.." + std::to_string(kMaxQubits));
        }
        if (((x | z) & ~full_mask()) != 0) {
            throw std::invalid_argument("PauliOperator mask has bits beyond its width");
        }
    }

    static PauliOperator identity(std::size_t width) { return PauliOperator(width); }

    static PauliOperator x_on(std::size_t width, std::initializer_list<std::size_t> qubits) {
        return PauliOperator(width, mask_of(qubits), 0);
    }

    static PauliOperator z_on(std::size_t width, std::initializer_list<std::size_t> qubits) {
        return PauliOperator(width, 0, mask_of(qubits));
    }

    /// Hermitian single-qubit Pauli on `qubit`; `which` is one of 'X', 'Y', 'Z'.
    static PauliOperator single(std::size_t width, std::size_t qubit, char which) {
        QubitMask b = QubitMask{1} << qubit;
        switch (which) {
            case 'X':
                return PauliOperator(width, b, 0);
            case 'Z':
                return PauliOperator(width, 0, b);
            case 'Y':
                return PauliOperator(width, b, b, 1);
            default:
                throw std::invalid_argument(std::string("not a Pauli symbol: ") + which);
        }
    }

    static PauliOperator from_string(std::string_view text) {
        std::uint8_t text_phase = 0;
        if (text.starts_with("+i")) {
            text_phase = 1;
            text.remove_prefix(2);
        } else if (text.starts_with("-i")) {
            text_phase = 3;
            text.remove_prefix(2);
        } else if (text.starts_with('+')) {
            text.remove_prefix(1);
        } else if (text.starts_with('-')) {
            text_phase = 2;
            text.remove_prefix(1);
        }
        QubitMask x = 0;
        QubitMask z = 0;
        for (std::size_t q = 0; q < text.size(); ++q) {
            QubitMask b = QubitMask{1} << q;
            switch (text[q]) {
                case 'I':
                case '_':
                    break;
                case 'X':
                    x |= b;
                    break;
                case 'Y':
                    x |= b;
                    z |= b;
                    break;
                case 'Z':
                    z |= b;
                    break;
                default:
                    throw std::invalid_argument("bad Pauli character '" + std::string(1, text[q]) + "' in " +
                                                std::string(text));
            }
        }
        return PauliOperator(text.size(), x, z, static_cast<std::uint8_t>(text_phase + popcount(x & z)));
    }

    std::size_t width() const { return width_; }
    QubitMask x_mask() const { return x_; }
    QubitMask z_mask() const { return z_; }
    QubitMask support() const { return x_ | z_; }
    QubitMask full_mask() const { return (QubitMask{1} << width_) - 1; }

    /// Exponent k of the i^k prefactor in i^k X^x Z^z.
    std::uint8_t phase() const { return phase_; }

    /// Exponent of the phase shown in the text form (Y counted as a symbol).
    std::uint8_t text_phase() const { return static_cast<std::uint8_t>((phase_ - popcount(x_ & z_)) & 3); }

    int weight() const { return popcount(x_ | z_); }
    bool is_identity_up_to_phase() const { return (x_ | z_) == 0; }
    bool is_x_type() const { return z_ == 0; }
    bool is_z_type() const { return x_ == 0; }

    /// Same Pauli string with text phase `+`.
    PauliOperator unsigned_form() const { return PauliOperator(width_, x_, z_, static_cast<std::uint8_t>(popcount(x_ & z_))); }

    PauliOperator negated() const { return PauliOperator(width_, x_, z_, static_cast<std::uint8_t>(phase_ + 2)); }

    /// Keeps only the qubits in `keep`; the text phase is preserved.
    PauliOperator restricted_to(QubitMask keep) const {
        QubitMask x = x_ & keep;
        QubitMask z = z_ & keep;
        return PauliOperator(width_, x, z, static_cast<std::uint8_t>(text_phase() + popcount(x & z)));
    }

    /// Reinterprets the low `width` qubits as a narrower operator.
    PauliOperator truncated(std::size_t width) const {
        QubitMask keep = (QubitMask{1} << width) - 1;
        QubitMask x = x_ & keep;
        QubitMask z = z_ & keep;
        return PauliOperator(width, x, z, static_cast<std::uint8_t>(text_phase() + popcount(x & z)));
    }

    /// Embeds into a wider register; new qubits carry identity.
    PauliOperator widened(std::size_t width) const {
        if (width < width_) {
            throw std::invalid_argument("widened() cannot shrink an operator");
        }
        return PauliOperator(width, x_, z_, phase_);
    }

    char symbol(std::size_t q) const {
        bool x = (x_ >> q) & 1;
        bool z = (z_ >> q) & 1;
        return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }

    std::string str() const {
        static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
        std::string out = kPrefix[text_phase()];
        for (std::size_t q = 0; q < width_; ++q) {
            out.push_back(symbol(q));
        }
        return out;
    }

    /// Compact sparse form such as `Z1 Z7 Z10`; an empty string for identity.
    std::string sparse_str() const {
        std::string out;
        for (std::size_t q = 0; q < width_; ++q) {
            char s = symbol(q);
            if (s == 'I') {
                continue;
            }
            if (!out.empty()) {
                out.push_back(' ');
            }
            out.push_back(s);
            out += std::to_string(q);
        }
        return out;
    }

    bool operator==(const PauliOperator&) const = default;

   private:
    std::uint8_t width_;
    QubitMask x_;
    QubitMask z_;
    std::uint8_t phase_;
};

inline void require_same_width(const PauliOperator& p, const PauliOperator& q) {
    if (p.width() != q.width()) {
        throw std::invalid_argument("Pauli width mismatch: " + std::to_string(p.width()) + " vs " +
                                    std::to_string(q.width()));
    }
}

/// Exact product pq.
inline PauliOperator multiply(const PauliOperator& p, const PauliOperator& q) {
    require_same_width(p, q);
    // Moving p's Z block past q's X block picks up (-1) per overlapping qubit.
    int phase = p.phase() + q.phase() + 2 * popcount(p.z_mask() & q.x_mask());
    return PauliOperator(p.width(), p.x_mask() ^ q.x_mask(), p.z_mask() ^ q.z_mask(),
                         static_cast<std::uint8_t>(phase & 3));
}

inline PauliOperator operator*(const PauliOperator& p, const PauliOperator& q) { return multiply(p, q); }

inline bool commutes(const PauliOperator& p, const PauliOperator& q) {
    require_same_width(p, q);
    return ((popcount(p.x_mask() & q.z_mask()) + popcount(p.z_mask() & q.x_mask())) & 1) == 0;
}

/// Group generated by an ordered list of equal-width operators.
struct PauliGroup {
    std::size_t width = 0;
    std::vector<PauliOperator> generators;

    PauliGroup() = default;
    PauliGroup(std::size_t w, std::vector<PauliOperator> gens) : width(w), generators(std::move(gens)) {
        for (const auto& g : generators) {
            if (g.width() != width) {
                throw std::invalid_argument("PauliGroup generator width mismatch");
            }
        }
    }

    void add(const PauliOperator& g) {
        if (generators.empty() && width == 0) {
            width = g.width();
        }
        if (g.width() != width) {
            throw std::invalid_argument("PauliGroup generator width mismatch");
        }
        generators.push_back(g);
    }
};

enum class Membership { NotMember, PlusMember, MinusMember };

inline const char* to_string(Membership m) {
    switch (m) {
        case Membership::NotMember:
            return "NotMember";
        case Membership::PlusMember:
            return "MemberWithSign(+1)";
        case Membership::MinusMember:
            return "MemberWithSign(-1)";
    }
    return "?";
}

namespace detail {

/// Symplectic bit vector: x bits low, z bits shifted by kMaxQubits.
inline std::uint64_t symplectic_bits(const PauliOperator& p) {
    return static_cast<std::uint64_t>(p.x_mask()) | (static_cast<std::uint64_t>(p.z_mask()) << kMaxQubits);
}

/// Row-reduced basis of a Pauli group. Each entry is an actual group element,
/// so phases survive the elimination.
struct ReducedBasis {
    std::vector<PauliOperator> rows;
    std::vector<std::uint64_t> pivots;
    // Set when some generator product collapsed onto a pure phase other than +1.
    bool contains_nontrivial_scalar = false;

    explicit ReducedBasis(const PauliGroup& g) {
        for (const auto& gen : g.generators) {
            PauliOperator v = gen;
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (symplectic_bits(v) & pivots[j]) {
                    v = multiply(v, rows[j]);
                }
            }
            std::uint64_t bits = symplectic_bits(v);
            if (bits == 0) {
                if (v.phase() != 0) {
                    contains_nontrivial_scalar = true;
                }
                continue;
            }
            rows.push_back(v);
            pivots.push_back(bits & (~bits + 1));
        }
    }

    std::size_t rank() const { return rows.size(); }
};

}  // namespace detail

/// Decides whether `p` (including its sign) belongs to the group generated by `g`.
/// Operators matching a group element only up to a factor of +-i are NotMember.
inline Membership in_group(const PauliOperator& p, const PauliGroup& g) {
    if (p.width() != g.width) {
        throw std::invalid_argument("in_group width mismatch");
    }
    detail::ReducedBasis basis(g);
    PauliOperator acc = PauliOperator::identity(p.width());
    for (std::size_t j = 0; j < basis.rows.size(); ++j) {
        std::uint64_t remaining = detail::symplectic_bits(p) ^ detail::symplectic_bits(acc);
        if (remaining & basis.pivots[j]) {
            acc = multiply(acc, basis.rows[j]);
        }
    }
    if (acc.x_mask() != p.x_mask() || acc.z_mask() != p.z_mask()) {
        return Membership::NotMember;
    }
    switch ((p.phase() - acc.phase()) & 3) {
        case 0:
            return Membership::PlusMember;
        case 2:
            return Membership::MinusMember;
        default:
            return Membership::NotMember;
    }
}

inline std::size_t group_rank(const PauliGroup& g) { return detail::ReducedBasis(g).rank(); }

/// Bit j is set iff `p` anticommutes with the j-th check.
inline std::vector<bool> syndrome(const PauliOperator& p, const PauliGroup& checks) {
    std::vector<bool> bits;
    bits.reserve(checks.generators.size());
    for (const auto& c : checks.generators) {
        bits.push_back(!commutes(p, c));
    }
    return bits;
}

inline bool any_set(const std::vector<bool>& bits) {
    for (bool b : bits) {
        if (b) {
            return true;
        }
    }
    return false;
}

/// Abelian, free of -I, and generated by independent operators.
inline bool is_stabilizer_group(const PauliGroup& g) {
    for (std::size_t i = 0; i < g.generators.size(); ++i) {
        for (std::size_t j = i + 1; j < g.generators.size(); ++j) {
            if (!commutes(g.generators[i], g.generators[j])) {
                return false;
            }
        }
    }
    if (g.generators.empty()) {
        return true;
    }
    detail::ReducedBasis basis(g);
    return !basis.contains_nontrivial_scalar && basis.rank() == g.generators.size();
}

}  // namespace qec832
