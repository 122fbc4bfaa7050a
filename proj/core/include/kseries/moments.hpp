#pragma once

#include <vector>

namespace kseries {

/// Raw moment sequence (m_0, m_1, ..., m_n) with m_0 = 1.
class MomentVector {
  public:
    /// values[0] must be 1 (exactly, up to 1e-9 slack for file round-trips).
    explicit MomentVector(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    int max_order() const { return int(values_.size()) - 1; }
    double operator[](int k) const { return values_[std::size_t(k)]; }

    /// Whether the Hankel matrix of (m_0..m_{2*floor(n/2)}) is positive
    /// semidefinite. Sample moments may violate this slightly; it is a
    /// diagnostic, never an error.
    bool hankel_psd(double tol = 1e-9) const;

  private:
    std::vector<double> values_;
};

/// Dense cross-moment tensor over the multi-index grid
/// {0..d_1} x ... x {0..d_k}, stored row-major in lexicographic multi-index
/// order (last axis fastest). Entry (0,...,0) = 1.
class MomentTensor {
  public:
    MomentTensor(std::vector<int> degrees, std::vector<double> values);

    /// Wrap a univariate moment vector as a k=1 tensor.
    static MomentTensor from_vector(const MomentVector& m);

    std::size_t num_axes() const { return degrees_.size(); }
    const std::vector<int>& degrees() const { return degrees_; }
    const std::vector<double>& values() const { return values_; }

    std::size_t flat_index(const std::vector<int>& index) const;
    double at(const std::vector<int>& index) const {
        return values_[flat_index(index)];
    }

    /// The axis marginal (all other indices zero) as a MomentVector.
    MomentVector marginal(std::size_t axis) const;

    /// Iterate the multi-index grid in storage order. Returns false after
    /// the last index. Start from index = all zeros.
    static bool next_index(std::vector<int>& index,
                           const std::vector<int>& degrees);

  private:
    std::vector<int> degrees_;
    std::vector<double> values_;
};

}  // namespace kseries
