#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kseries/distribution.hpp"
#include "kseries/estimator.hpp"
#include "kseries/gof.hpp"
#include "kseries/moments.hpp"
#include "kseries/polynomial.hpp"

namespace kseries {

using json = nlohmann::json;

/// Polynomials are arrays of coefficients, lowest degree first.
json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const json& j);

/// {"family": ..., "params": {...}, "support": [a, b]}; unbounded edges are
/// the strings "-inf"/"inf". numeric_pdf distributions cannot round-trip.
json to_json(const Distribution& d);
Distribution distribution_from_json(const json& j);

/// Reference descriptor + row-major lower-triangular coefficient matrix.
json to_json(const OrthonormalBasis& b);
OrthonormalBasis basis_from_json(const json& j);

json to_json(const MultiBasis& b);
MultiBasis multibasis_from_json(const json& j);

/// {"degrees": [...], "values": [...]} in lexicographic multi-index order.
json to_json(const MomentTensor& m);
MomentTensor moment_tensor_from_json(const json& j);
json to_json(const MomentVector& m);
MomentVector moment_vector_from_json(const json& j);

/// Where an estimate's moments came from; carried through fit artifacts so
/// downstream reports are self-describing.
struct EstimateProvenance {
    std::string moment_source;  // e.g. "sample", "simulate", "closed-form"
    std::vector<int> degrees;
};

json estimate_to_json(const DensityEstimate& e, const EstimateProvenance& p);
DensityEstimate estimate_from_json(const json& j);
EstimateProvenance provenance_from_json(const json& j);

json to_json(const TestReport& r);

/// Observation matrices as CSV with a header row of variable names. Values
/// round-trip bit-exactly.
void write_observations_csv(std::ostream& os,
                            const std::vector<std::string>& names,
                            const std::vector<std::vector<double>>& rows);
std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_observations_csv(std::istream& is);

/// Grid output: columns x_1..x_k, fhat.
void write_grid_csv(std::ostream& os,
                    const std::vector<std::vector<double>>& points,
                    const std::vector<double>& values);

}  // namespace kseries
