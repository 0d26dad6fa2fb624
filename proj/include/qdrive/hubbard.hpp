#pragma once

#include <array>
#include <optional>

#include "qdrive/complex_mat2.hpp"

namespace qdrive {

/// Level label of the two-level system.
enum class Level : int { p = 0, q = 1 };

/// Index pair (i, j) of the rank-one operator |i><j|.
struct HubbardIndex {
    Level row;
    Level col;

    friend bool operator==(const HubbardIndex& x, const HubbardIndex& y) {
        return x.row == y.row && x.col == y.col;
    }
};

inline constexpr std::array<HubbardIndex, 4> all_hubbard_indices() {
    return {HubbardIndex{Level::p, Level::p}, HubbardIndex{Level::p, Level::q},
            HubbardIndex{Level::q, Level::p}, HubbardIndex{Level::q, Level::q}};
}

/// Multiplication rule X^{i,j} X^{k,m} = delta_{j,k} X^{i,m}.
/// Returns the resulting index, or nullopt for the zero operator.
std::optional<HubbardIndex> hubbard_product(const HubbardIndex& x, const HubbardIndex& y);

/// Matrix of |row><col| in the (|p>, |q>) basis.
Mat2 hubbard_matrix(const HubbardIndex& idx);

/// su(2) generators in the Hubbard representation:
/// J0 = (X^{pp} - X^{qq})/2, J+ = X^{pq}, J- = X^{qp}.
Mat2 su2_j0();
Mat2 su2_jplus();
Mat2 su2_jminus();

} // namespace qdrive
