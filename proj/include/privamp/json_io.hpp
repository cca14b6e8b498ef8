// JSON forms of the state and matrix types: complex entries as [re, im]
// pairs, classical labels as strings.
#pragma once

#include <string>

#include "json.hpp"
#include "privamp/qinfo.hpp"

namespace privamp::io {

using nlohmann::json;

inline json to_json(const qmat::ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline qmat::ComplexMatrix matrix_from_json(const json& j) {
    std::size_t rows = j.size();
    std::size_t cols = rows == 0 ? 0 : j.at(0).size();
    qmat::ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) {
            const json& e = j.at(i).at(c);
            m(i, c) = qmat::cplx{e.at(0).get<double>(), e.at(1).get<double>()};
        }
    return m;
}

inline json to_json(const qinfo::CqState& rho) {
    json labels = json::array();
    for (std::uint64_t l : rho.labels) labels.push_back(std::to_string(l));
    json blocks = json::array();
    for (const auto& b : rho.blocks) blocks.push_back(to_json(b.matrix()));
    return json{{"labels", labels}, {"dim_e", rho.dim_e}, {"blocks", blocks}};
}

inline qinfo::CqState cq_from_json(const json& j) {
    std::vector<std::uint64_t> labels;
    for (const auto& l : j.at("labels"))
        labels.push_back(std::stoull(l.get<std::string>()));
    std::vector<qmat::HermitianOperator> blocks;
    for (const auto& b : j.at("blocks"))
        blocks.push_back(qmat::HermitianOperator::symmetrized(matrix_from_json(b)));
    return qinfo::CqState(std::move(labels), std::move(blocks));
}

}  // namespace privamp::io
