#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "susycalc/errors.hpp"
#include "susycalc/pfaffian/skew_matrix.hpp"

namespace susy::pfaffian {

/// Parses {"n": <even int>, "entries": [[row], ...]} into a scalar skew
/// matrix, validating skewness within `tol`.
inline SkewMatrix<double> skew_matrix_from_json(const nlohmann::json& doc,
                                                double tol = kDefaultTolerance) {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries"))
        throw LoadError("skew matrix JSON must be an object with \"n\" and \"entries\"");
    if (!doc["n"].is_number_integer())
        throw LoadError("\"n\" must be an integer");
    const int n = doc["n"].get<int>();
    if (n <= 0 || n % 2 != 0)
        throw LoadError("\"n\" must be a positive even integer, got " + std::to_string(n));
    const auto& rows = doc["entries"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw LoadError("\"entries\" must be an array of " + std::to_string(n) + " rows");

    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw LoadError("row " + std::to_string(i) + " must have " + std::to_string(n) +
                            " numeric entries");
        for (int j = 0; j < n; ++j) {
            const auto& v = row[static_cast<std::size_t>(j)];
            if (!v.is_number())
                throw LoadError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") is not a number");
            e.push_back(v.get<double>());
        }
    }

    // Re-run the checks here so violations surface as load errors naming
    // the offending entry.
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (std::fabs(e[static_cast<std::size_t>(i) * n + j] +
                          e[static_cast<std::size_t>(j) * n + i]) > tol)
                throw LoadError("input is not skew-symmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");

    return SkewMatrix<double>(n, std::move(e), tol);
}

inline SkewMatrix<double> load_skew_matrix(const std::string& path,
                                           double tol = kDefaultTolerance) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw LoadError("invalid JSON in " + path + ": " + e.what());
    }
    return skew_matrix_from_json(doc, tol);
}

}  // namespace susy::pfaffian
