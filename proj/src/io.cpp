#include "ineqcond/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace ineqcond {

namespace {

double parse_double(const std::string& tok) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + tok + "'");
    }
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size()) throw ParseError("trailing characters in '" + tok + "'");
    if (!std::isfinite(v)) throw ParseError("non-finite value: '" + tok + "'");
    return v;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Matrix read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(parse_double(trim(tok)));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("ragged rows in CSV matrix");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty matrix");
    Matrix m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
    out.precision(17);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("m") || !j.contains("n") || !j.contains("data"))
        throw ParseError("matrix JSON must be {\"m\", \"n\", \"data\"}");
    const int m = j.at("m").get<int>();
    const int n = j.at("n").get<int>();
    const auto& data = j.at("data");
    if (m < 1 || n < 1 || !data.is_array() || static_cast<int>(data.size()) != m)
        throw ParseError("matrix JSON shape mismatch");
    Matrix out(m, n);
    for (int i = 0; i < m; ++i) {
        const auto& row = data.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ParseError("matrix JSON shape mismatch in row " + std::to_string(i));
        for (int k = 0; k < n; ++k) {
            if (!row.at(k).is_number()) throw ParseError("matrix entries must be finite numbers");
            double v = row.at(k).get<double>();
            if (!std::isfinite(v)) throw ParseError("matrix entries must be finite numbers");
            out(i, k) = v;
        }
    }
    return out;
}

Json matrix_to_json(const Matrix& m) {
    Json data = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        data.push_back(std::move(row));
    }
    return Json{{"m", m.rows()}, {"n", m.cols()}, {"data", std::move(data)}};
}

Matrix read_matrix_file(const std::string& path, const std::string& format) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path);
    std::string fmt = format;
    if (fmt == "auto") {
        auto dot = path.rfind('.');
        std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
        fmt = ext == "json" ? "json" : "csv";
    }
    if (fmt == "csv") return read_matrix_csv(in);
    if (fmt == "json") {
        Json j;
        try {
            in >> j;
        } catch (const Json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what());
        }
        return matrix_from_json(j);
    }
    throw ParseError("unknown format: " + fmt);
}

Json record_to_json(const TransformRecord& record) {
    Json s = Json::array();
    for (int i = 0; i < record.s().size(); ++i) s.push_back(record.s()(i));
    Json p = Json::array();
    for (int i = 0; i < record.p().rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < record.p().cols(); ++j) row.push_back(record.p()(i, j));
        p.push_back(std::move(row));
    }
    return Json{{"order", to_string(record.order())},
                {"S", std::move(s)},
                {"P", std::move(p)},
                {"A_hat", matrix_to_json(record.a_hat().matrix())}};
}

TransformRecord record_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("order") || !j.contains("S") || !j.contains("P") ||
        !j.contains("A_hat"))
        throw ParseError("record JSON must be {\"order\", \"S\", \"P\", \"A_hat\"}");
    Order order = order_from_string(j.at("order").get<std::string>());
    Matrix a_hat = matrix_from_json(j.at("A_hat"));
    const int m = static_cast<int>(a_hat.rows());
    const int n = static_cast<int>(a_hat.cols());

    const auto& sj = j.at("S");
    if (!sj.is_array() || static_cast<int>(sj.size()) != n)
        throw ParseError("record S must have n entries");
    Vector s(n);
    for (int i = 0; i < n; ++i) s(i) = sj.at(i).get<double>();

    const auto& pj = j.at("P");
    if (!pj.is_array() || static_cast<int>(pj.size()) != m)
        throw ParseError("record P must be m x m");
    Matrix p(m, m);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(pj.at(i).size()) != m) throw ParseError("record P must be m x m");
        for (int k = 0; k < m; ++k) p(i, k) = pj.at(i).at(k).get<double>();
    }
    if (!s.allFinite() || !p.allFinite()) throw ParseError("record factors must be finite");

    // A = P^{-1} * A_hat * S^{-1}
    Matrix original = p.fullPivLu().solve(a_hat) * s.cwiseInverse().asDiagonal();
    return TransformRecord(std::move(s), std::move(p), order, ProblemInstance::validate(a_hat),
                           ProblemInstance::validate(original));
}

namespace {

Json finite_or_inf(double v) {
    if (std::isinf(v)) return Json("inf");
    return Json(v);
}

Json interval_to_json(const Interval& iv) {
    return Json::array({finite_or_inf(iv.lo), finite_or_inf(iv.hi)});
}

}  // namespace

Json report_to_json(const ConditionReport& report) {
    Json witness = Json::array();
    for (int i = 0; i < report.feasibility.witness.size(); ++i)
        witness.push_back(report.feasibility.witness(i));
    Json grassmann;
    if (report.grassmann_degenerate)
        grassmann = "degenerate";
    else
        grassmann = finite_or_inf(report.grassmann);
    return Json{{"feasibility",
                 Json{{"tag", to_string(report.feasibility.tag)},
                      {"witness", std::move(witness)},
                      {"margin", report.feasibility.margin}}},
                {"gcc", finite_or_inf(report.gcc)},
                {"grassmann", std::move(grassmann)},
                {"renegar12", interval_to_json(report.renegar.r12)},
                {"renegar22", interval_to_json(report.renegar.r22)},
                {"col_ratio", report.col_ratio},
                {"sigma_ratio", report.sigma_ratio}};
}

Json oracle_to_json(const OracleResult& result) {
    return Json{{"value", result.value},
                {"bound_kind", to_string(result.bound_kind)},
                {"evaluations", result.evaluations},
                {"seed", result.seed},
                {"witness", matrix_to_json(result.witness)}};
}

Json sweep_to_json(const SweepReport& report) {
    Json quantiles = Json::object();
    for (const auto& [key, q] : report.quantiles)
        quantiles[key] = Json::array({q[0], q[1], q[2], q[3], q[4]});
    Json failures = Json::array();
    for (const auto& f : report.failures) failures.push_back(matrix_to_json(f));
    const char* ensemble =
        report.config.ensemble == SweepConfig::Ensemble::Gaussian ? "gaussian" : "sphere";
    return Json{{"config", Json{{"m", report.config.m},
                                {"n", report.config.n},
                                {"trials", report.config.trials},
                                {"seed", report.config.seed},
                                {"ensemble", ensemble}}},
                {"violations", report.violations},
                {"completed", report.completed},
                {"min_slack", report.min_slack},
                {"quantiles", std::move(quantiles)},
                {"failures", std::move(failures)}};
}

Vector read_vector_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path);
    std::vector<double> vals;
    std::string tok;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::stringstream ss(content);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        std::stringstream inner(piece);
        std::string w;
        while (inner >> w) vals.push_back(parse_double(w));
    }
    if (vals.empty()) throw ParseError("empty vector file");
    Vector v(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) v(i) = vals[i];
    return v;
}

}  // namespace ineqcond
