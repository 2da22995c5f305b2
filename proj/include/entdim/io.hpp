// io.hpp
// State file format shared with the CLI:
//   {"dims": [d1, ..., dn], "kind": "pure"|"mixed", "data": ...}
// where data holds [re, im] pairs: a flat vector for pure states, a row-major
// nested array for density matrices.

#pragma once

#include <fstream>
#include <variant>

#include <json.hpp>

#include "states.hpp"

namespace entdim {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using AnyState = std::variant<PureState, DensityMatrix>;

inline nlohmann::json to_json(const PureState& psi) {
    nlohmann::json data = nlohmann::json::array();
    for (long i = 0; i < psi.dim(); ++i)
        data.push_back({psi.amplitudes[i].real(), psi.amplitudes[i].imag()});
    return {{"dims", psi.dims}, {"kind", "pure"}, {"data", data}};
}

inline nlohmann::json to_json(const DensityMatrix& rho) {
    nlohmann::json data = nlohmann::json::array();
    for (long r = 0; r < rho.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (long c = 0; c < rho.dim(); ++c)
            row.push_back({rho.matrix(r, c).real(), rho.matrix(r, c).imag()});
        data.push_back(row);
    }
    return {{"dims", rho.dims}, {"kind", "mixed"}, {"data", data}};
}

inline AnyState state_from_json(const nlohmann::json& j) {
    try {
        std::vector<int> dims = j.at("dims").get<std::vector<int>>();
        std::string kind = j.at("kind").get<std::string>();
        long dim = total_dim(dims);
        auto complex_of = [](const nlohmann::json& pair) {
            if (!pair.is_array() || pair.size() != 2)
                throw ParseError("state file: entries must be [re, im] pairs");
            return Complex(pair[0].get<double>(), pair[1].get<double>());
        };
        if (kind == "pure") {
            const auto& data = j.at("data");
            if (!data.is_array() || static_cast<long>(data.size()) != dim)
                throw ParseError("state file: amplitude count does not match dims");
            Vector v(dim);
            for (long i = 0; i < dim; ++i) v[i] = complex_of(data[i]);
            return PureState(std::move(v), std::move(dims));
        }
        if (kind == "mixed") {
            const auto& data = j.at("data");
            if (!data.is_array() || static_cast<long>(data.size()) != dim)
                throw ParseError("state file: row count does not match dims");
            Matrix m(dim, dim);
            for (long r = 0; r < dim; ++r) {
                const auto& row = data[r];
                if (!row.is_array() || static_cast<long>(row.size()) != dim)
                    throw ParseError("state file: matrix is not square");
                for (long c = 0; c < dim; ++c) m(r, c) = complex_of(row[c]);
            }
            return DensityMatrix(std::move(m), std::move(dims));
        }
        throw ParseError("state file: kind must be \"pure\" or \"mixed\"");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("state file: ") + e.what());
    }
}

inline AnyState read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return state_from_json(j);
}

template <typename State>
inline void write_state_file(const std::string& path, const State& state) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write state file: " + path);
    out << to_json(state).dump(2) << "\n";
}

inline DensityMatrix as_density(const AnyState& s) {
    if (std::holds_alternative<PureState>(s))
        return DensityMatrix::from_pure(std::get<PureState>(s));
    return std::get<DensityMatrix>(s);
}

inline const std::vector<int>& dims_of(const AnyState& s) {
    if (std::holds_alternative<PureState>(s)) return std::get<PureState>(s).dims;
    return std::get<DensityMatrix>(s).dims;
}

}  // namespace entdim
