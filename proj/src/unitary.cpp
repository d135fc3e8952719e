#include "qsat/unitary.hpp"

#include <stdexcept>
#include <string>

#include "qsat/errors.hpp"
#include "qsat/statevector.hpp"

namespace qsat {

Eigen::MatrixXcd unitary_of(const Circuit &c) {
    if (c.width() > kMaxUnitaryWidth) {
        throw ResourceError("unitary extraction limited to " + std::to_string(kMaxUnitaryWidth) + " qubits, got " +
                            std::to_string(c.width()));
    }
    const auto dim = std::size_t{1} << c.width();
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        auto s = run_statevector(c, StateVector::basis(c.width(), col));
        for (std::size_t row = 0; row < dim; ++row) u(row, col) = s[row];
    }
    return u;
}

double distance_up_to_global_phase(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("matrix shapes differ");
    }
    Eigen::Index r = 0, c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    std::complex<double> phase(1.0, 0.0);
    if (std::abs(b(r, c)) > 0 && std::abs(a(r, c)) > 0) {
        phase = a(r, c) / b(r, c);
        phase /= std::abs(phase);
    }
    return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace qsat
