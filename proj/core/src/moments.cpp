#include "kseries/moments.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "kseries/errors.hpp"

namespace kseries {

MomentVector::MomentVector(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty()) throw Error("MomentVector: empty");
    if (std::abs(values_[0] - 1.0) > 1e-9)
        throw Error("MomentVector: m_0 must be 1");
    values_[0] = 1.0;
}

bool MomentVector::hankel_psd(double tol) const {
    int half = max_order() / 2;
    Eigen::MatrixXd hankel(half + 1, half + 1);
    for (int i = 0; i <= half; ++i)
        for (int j = 0; j <= half; ++j) hankel(i, j) = values_[i + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hankel);
    return solver.eigenvalues().minCoeff() >= -tol;
}

MomentTensor::MomentTensor(std::vector<int> degrees,
                           std::vector<double> values)
    : degrees_(std::move(degrees)), values_(std::move(values)) {
    if (degrees_.empty()) throw Error("MomentTensor: no axes");
    std::size_t expected = 1;
    for (int d : degrees_) {
        if (d < 0) throw Error("MomentTensor: negative degree");
        expected *= std::size_t(d) + 1;
    }
    if (values_.size() != expected)
        throw DegreeMismatch("MomentTensor: value count does not match grid");
    if (std::abs(values_[0] - 1.0) > 1e-9)
        throw Error("MomentTensor: entry (0,...,0) must be 1");
    values_[0] = 1.0;
}

MomentTensor MomentTensor::from_vector(const MomentVector& m) {
    return MomentTensor({m.max_order()}, m.values());
}

std::size_t MomentTensor::flat_index(const std::vector<int>& index) const {
    if (index.size() != degrees_.size())
        throw DimensionMismatch("MomentTensor: index arity mismatch");
    std::size_t flat = 0;
    for (std::size_t j = 0; j < degrees_.size(); ++j) {
        if (index[j] < 0 || index[j] > degrees_[j])
            throw DegreeMismatch("MomentTensor: index out of range");
        flat = flat * (std::size_t(degrees_[j]) + 1) + std::size_t(index[j]);
    }
    return flat;
}

MomentVector MomentTensor::marginal(std::size_t axis) const {
    if (axis >= degrees_.size())
        throw DimensionMismatch("MomentTensor: bad axis");
    std::vector<int> index(degrees_.size(), 0);
    std::vector<double> out(std::size_t(degrees_[axis]) + 1);
    for (int k = 0; k <= degrees_[axis]; ++k) {
        index[axis] = k;
        out[std::size_t(k)] = at(index);
    }
    return MomentVector(std::move(out));
}

bool MomentTensor::next_index(std::vector<int>& index,
                              const std::vector<int>& degrees) {
    for (std::size_t j = index.size(); j-- > 0;) {
        if (index[j] < degrees[j]) {
            ++index[j];
            return true;
        }
        index[j] = 0;
    }
    return false;
}

}  // namespace kseries
