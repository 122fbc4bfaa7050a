#include "kseries/serialize.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "kseries/errors.hpp"

namespace kseries {

namespace {

json edge_to_json(double x) {
    if (x == std::numeric_limits<double>::infinity()) return "inf";
    if (x == -std::numeric_limits<double>::infinity()) return "-inf";
    return x;
}

double edge_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw Error("distribution: bad support edge \"" + s + "\"");
    }
    return j.get<double>();
}

double param(const std::map<std::string, double>& p, const std::string& name,
             const std::string& family) {
    auto it = p.find(name);
    if (it == p.end())
        throw Error("distribution: " + family + " needs parameter \"" + name +
                    "\"");
    return it->second;
}

// Shortest decimal digits that reparse to the same double.
void append_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

}  // namespace

json to_json(const Polynomial& p) { return json(p.coeffs()); }

Polynomial polynomial_from_json(const json& j) {
    if (!j.is_array()) throw Error("polynomial: expected a JSON array");
    return Polynomial(j.get<std::vector<double>>());
}

json to_json(const Distribution& d) {
    json params = json::object();
    for (const auto& [name, value] : d.params()) params[name] = value;
    Support s = d.support();
    return json{{"family", d.family()},
                {"params", std::move(params)},
                {"support", {edge_to_json(s.lower), edge_to_json(s.upper)}}};
}

Distribution distribution_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    std::map<std::string, double> p;
    for (const auto& [name, value] : j.at("params").items())
        p[name] = value.get<double>();
    auto need = [&](const char* n) { return param(p, n, family); };

    if (family == "uniform")
        return Distribution::uniform(need("a"), need("b"));
    if (family == "normal")
        return Distribution::normal(need("mean"), need("variance"));
    if (family == "truncated_normal")
        return Distribution::truncated_normal(need("mean"), need("variance"),
                                              need("a"), need("b"));
    if (family == "truncated_exponential")
        return Distribution::truncated_exponential(need("rate"), need("a"),
                                                   need("b"));
    if (family == "truncated_gamma")
        return Distribution::truncated_gamma(need("alpha"), need("beta"),
                                             need("a"), need("b"));
    if (family == "continuous_bernoulli")
        return Distribution::continuous_bernoulli(need("pi"));
    if (family == "beta")
        return Distribution::beta(need("alpha"), need("beta"));
    throw Error("distribution: family \"" + family +
                "\" cannot be deserialized");
}

json to_json(const OrthonormalBasis& b) {
    const auto& A = b.coefficient_matrix();
    json rows = json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index c = 0; c <= i; ++c) row.push_back(A(i, c));
        rows.push_back(std::move(row));
    }
    return json{{"reference", to_json(b.reference())},
                {"coefficients", std::move(rows)},
                {"hankel_condition", b.hankel_condition()}};
}

OrthonormalBasis basis_from_json(const json& j) {
    Distribution ref = distribution_from_json(j.at("reference"));
    const json& rows = j.at("coefficients");
    const Eigen::Index n = Eigen::Index(rows.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = rows[std::size_t(i)];
        if (Eigen::Index(row.size()) != i + 1)
            throw Error("basis: row " + std::to_string(i) +
                        " is not lower-triangular");
        for (Eigen::Index c = 0; c <= i; ++c)
            A(i, c) = row[std::size_t(c)].get<double>();
    }
    double cond = j.value("hankel_condition", 0.0);
    return OrthonormalBasis::restore(std::move(ref), std::move(A), cond);
}

json to_json(const MultiBasis& b) {
    json axes = json::array();
    for (std::size_t a = 0; a < b.num_axes(); ++a)
        axes.push_back(to_json(b.axis(a)));
    return json{{"axes", std::move(axes)}};
}

MultiBasis multibasis_from_json(const json& j) {
    std::vector<OrthonormalBasis> axes;
    for (const json& a : j.at("axes")) axes.push_back(basis_from_json(a));
    return MultiBasis(std::move(axes));
}

json to_json(const MomentTensor& m) {
    return json{{"degrees", m.degrees()}, {"values", m.values()}};
}

MomentTensor moment_tensor_from_json(const json& j) {
    return MomentTensor(j.at("degrees").get<std::vector<int>>(),
                        j.at("values").get<std::vector<double>>());
}

json to_json(const MomentVector& m) {
    return json{{"degrees", {m.max_order()}}, {"values", m.values()}};
}

MomentVector moment_vector_from_json(const json& j) {
    MomentTensor t = moment_tensor_from_json(j);
    if (t.num_axes() != 1)
        throw DimensionMismatch("moment vector: expected one axis");
    return MomentVector(t.values());
}

json estimate_to_json(const DensityEstimate& e, const EstimateProvenance& p) {
    json out{{"basis", to_json(e.basis())},
             {"alpha", e.alpha()},
             {"provenance",
              {{"moment_source", p.moment_source}, {"degrees", p.degrees}}}};
    if (e.warning()) out["warning"] = *e.warning();
    return out;
}

DensityEstimate estimate_from_json(const json& j) {
    DensityEstimate e(multibasis_from_json(j.at("basis")),
                      j.at("alpha").get<std::vector<double>>());
    if (j.contains("warning"))
        e.set_warning(j.at("warning").get<std::string>());
    return e;
}

EstimateProvenance provenance_from_json(const json& j) {
    EstimateProvenance p;
    if (!j.contains("provenance")) return p;
    const json& pv = j.at("provenance");
    p.moment_source = pv.value("moment_source", std::string{});
    p.degrees = pv.value("degrees", std::vector<int>{});
    return p;
}

json to_json(const TestReport& r) {
    json out{{"statistic", r.statistic},
             {"alpha", r.alpha},
             {"rejected", r.rejected},
             {"n1", r.n1},
             {"n2", r.n2}};
    if (r.threshold) out["threshold"] = *r.threshold;
    if (r.p_value) out["p_value"] = *r.p_value;
    return out;
}

void write_observations_csv(std::ostream& os,
                            const std::vector<std::string>& names,
                            const std::vector<std::vector<double>>& rows) {
    std::string line;
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (c) line += ',';
        line += names[c];
    }
    line += '\n';
    os << line;
    for (const auto& row : rows) {
        if (row.size() != names.size())
            throw DimensionMismatch("csv: row arity mismatch");
        line.clear();
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += ',';
            append_double(line, row[c]);
        }
        line += '\n';
        os << line;
    }
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_observations_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw EmptyData("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> names;
    {
        std::stringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ',')) names.push_back(cell);
    }
    if (names.empty()) throw EmptyData("csv: empty header");

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(names.size());
        const char* p = line.data();
        const char* end = p + line.size();
        for (;;) {
            double v = 0.0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc{})
                throw Error("csv: bad number at line " +
                            std::to_string(lineno));
            row.push_back(v);
            p = next;
            if (p == end) break;
            if (*p != ',')
                throw Error("csv: expected ',' at line " +
                            std::to_string(lineno));
            ++p;
        }
        if (row.size() != names.size())
            throw DimensionMismatch("csv: line " + std::to_string(lineno) +
                                    " has " + std::to_string(row.size()) +
                                    " fields, header has " +
                                    std::to_string(names.size()));
        rows.push_back(std::move(row));
    }
    return {std::move(names), std::move(rows)};
}

void write_grid_csv(std::ostream& os,
                    const std::vector<std::vector<double>>& points,
                    const std::vector<double>& values) {
    if (points.size() != values.size())
        throw DimensionMismatch("grid csv: points/values size mismatch");
    const std::size_t k = points.empty() ? 1 : points.front().size();
    std::string line;
    for (std::size_t c = 0; c < k; ++c) line += "x" + std::to_string(c + 1) + ",";
    line += "fhat\n";
    os << line;
    for (std::size_t r = 0; r < points.size(); ++r) {
        if (points[r].size() != k)
            throw DimensionMismatch("grid csv: point arity mismatch");
        line.clear();
        for (double x : points[r]) {
            append_double(line, x);
            line += ',';
        }
        append_double(line, values[r]);
        line += '\n';
        os << line;
    }
}

}  // namespace kseries
