#pragma once

#include <json.hpp>
#include <string>

#include "qpir/codes.hpp"
#include "qpir/protocol.hpp"

namespace qpir {

// Ordered JSON keeps key order stable so transcripts replay byte-for-byte.
using Json = nlohmann::ordered_json;

Json field_spec_to_json(const FieldSpec& spec);
const FieldSpec& field_spec_from_json(const Json& j);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j, const FieldSpec& spec);

// Row-major entries as an array of hex strings, with the shape and field
// alongside so a matrix file stands alone.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json code_to_json(const GrsCode& code);
GrsCode code_from_json(const Json& j);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

}  // namespace qpir
