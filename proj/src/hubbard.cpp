#include "qdrive/hubbard.hpp"

namespace qdrive {

std::optional<HubbardIndex> hubbard_product(const HubbardIndex& x, const HubbardIndex& y) {
    if (x.col != y.row) return std::nullopt;
    return HubbardIndex{x.row, y.col};
}

Mat2 hubbard_matrix(const HubbardIndex& idx) {
    Mat2 m = Mat2::zero();
    m(static_cast<int>(idx.row), static_cast<int>(idx.col)) = cplx(1.0);
    return m;
}

Mat2 su2_j0() {
    return (hubbard_matrix({Level::p, Level::p}) - hubbard_matrix({Level::q, Level::q})) *
           cplx(0.5);
}

Mat2 su2_jplus() { return hubbard_matrix({Level::p, Level::q}); }

Mat2 su2_jminus() { return hubbard_matrix({Level::q, Level::p}); }

} // namespace qdrive
