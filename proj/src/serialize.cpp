#include "qpir/serialize.hpp"

#include <fstream>

namespace qpir {

Json field_spec_to_json(const FieldSpec& spec) {
    return Json{{"r", spec.degree()}, {"modulus", spec.modulus()}};
}

const FieldSpec& field_spec_from_json(const Json& j) {
    if (!j.contains("r")) throw ConfigError("field spec missing 'r'");
    unsigned r = j.at("r").get<unsigned>();
    if (j.contains("modulus") && j.at("modulus").get<uint32_t>() != 0) {
        return FieldSpec::get(r, j.at("modulus").get<uint32_t>());
    }
    return FieldSpec::get(r);
}

Json vec_to_json(const Vec& v) {
    Json out = Json::array();
    for (const auto& e : v) out.push_back(e.to_hex());
    return out;
}

Vec vec_from_json(const Json& j, const FieldSpec& spec) {
    Vec out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(FieldElement::from_hex(e.get<std::string>(), spec));
    return out;
}

Json matrix_to_json(const Matrix& m) {
    Json entries = Json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < m.cols(); ++j) entries.push_back(m.at(i, j).to_hex());
    }
    return Json{{"rows", m.rows()},
                {"cols", m.cols()},
                {"field", field_spec_to_json(m.spec())},
                {"entries", entries}};
}

Matrix matrix_from_json(const Json& j) {
    const FieldSpec& spec = field_spec_from_json(j.at("field"));
    size_t rows = j.at("rows").get<size_t>();
    size_t cols = j.at("cols").get<size_t>();
    const Json& entries = j.at("entries");
    if (entries.size() != rows * cols) throw ConfigError("matrix entry count != rows*cols");
    Matrix m(rows, cols, spec);
    size_t idx = 0;
    for (size_t i = 0; i < rows; ++i) {
        for (size_t col = 0; col < cols; ++col) {
            m.set(i, col, FieldElement::from_hex(entries[idx++].get<std::string>(), spec));
        }
    }
    return m;
}

Json code_to_json(const GrsCode& code) {
    return Json{{"field", field_spec_to_json(code.spec())},
                {"locators", vec_to_json(code.locators())},
                {"multipliers", vec_to_json(code.multipliers())},
                {"dim", code.dim()}};
}

GrsCode code_from_json(const Json& j) {
    const FieldSpec& spec = field_spec_from_json(j.at("field"));
    return GrsCode(vec_from_json(j.at("locators"), spec),
                   vec_from_json(j.at("multipliers"), spec), j.at("dim").get<size_t>());
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << j.dump(2) << "\n";
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace qpir
