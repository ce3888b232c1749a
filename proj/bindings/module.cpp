#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpir/harness.hpp"

namespace py = pybind11;
using namespace qpir;

namespace {

py::object json_to_py(const Json& j) {
    switch (j.type()) {
        case Json::value_t::null: return py::none();
        case Json::value_t::boolean: return py::bool_(j.get<bool>());
        case Json::value_t::number_integer: return py::int_(j.get<int64_t>());
        case Json::value_t::number_unsigned: return py::int_(j.get<uint64_t>());
        case Json::value_t::number_float: return py::float_(j.get<double>());
        case Json::value_t::string: return py::str(j.get<std::string>());
        case Json::value_t::array: {
            py::list out;
            for (const auto& e : j) out.append(json_to_py(e));
            return out;
        }
        case Json::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
            return out;
        }
        default: return py::none();
    }
}

Json py_to_json(const py::handle& obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) return obj.cast<int64_t>();
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        Json out = Json::object();
        for (auto item : obj.cast<py::dict>()) {
            out[item.first.cast<std::string>()] = py_to_json(item.second);
        }
        return out;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        Json out = Json::array();
        for (auto item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
        return out;
    }
    throw py::type_error("unsupported config value");
}

SimulationConfig config_from_dict(const py::dict& d) {
    return SimulationConfig::from_json(py_to_json(d));
}

}  // namespace

PYBIND11_MODULE(_qpirsim, m) {
    m.doc() = "Private information retrieval from coded storage with entangled servers";

    py::register_exception<Error>(m, "QpirError");

    py::class_<Rational>(m, "Rational")
        .def_readonly("num", &Rational::num)
        .def_readonly("den", &Rational::den)
        .def("__str__", &Rational::str)
        .def("__eq__",
             [](const Rational& a, const Rational& b) { return a == b; })
        .def("__repr__", [](const Rational& r) { return "Rational(" + r.str() + ")"; });

    py::class_<SchemeParams>(m, "SchemeParams")
        .def_readonly("n", &SchemeParams::n)
        .def_readonly("k", &SchemeParams::k)
        .def_readonly("t", &SchemeParams::t)
        .def_readonly("m", &SchemeParams::m)
        .def_readonly("c", &SchemeParams::c)
        .def_readonly("beta", &SchemeParams::beta)
        .def_readonly("rho", &SchemeParams::rho)
        .def_property_readonly("rate", [](const SchemeParams& p) { return scheme_rate(p); });

    m.def(
        "derive_params",
        [](size_t n, size_t k, size_t t, size_t m, unsigned r) {
            if (r == 0) {
                r = 1;
                while ((1u << r) < n) ++r;
            }
            return derive_params(n, k, t, m, FieldSpec::get(r));
        },
        py::arg("n"), py::arg("k"), py::arg("t"), py::arg("m") = 2, py::arg("r") = 0,
        "Scheme parameters; r = field degree (0 picks the smallest field >= n)");

    m.def("pad_collusion", &pad_collusion, py::arg("n"), py::arg("k"), py::arg("t"),
          "Effective (n', t') for k+t-1 < n/2");

    m.def(
        "scheme_rate",
        [](size_t n, size_t k, size_t t) {
            unsigned r = 1;
            while ((1u << r) < n) ++r;
            return scheme_rate(derive_params(n, k, t, 2, FieldSpec::get(r)));
        },
        py::arg("n"), py::arg("k"), py::arg("t"));

    m.def(
        "simulate",
        [](const py::dict& config) {
            Transcript transcript = run_simulation(config_from_dict(config));
            py::dict out = json_to_py(transcript.to_json());
            out["decoded_matches_stored"] =
                py::bool_(transcript.decoded == transcript.stored_file);
            out["downloaded_systems"] = py::int_(transcript.downloaded_systems);
            return out;
        },
        py::arg("config"), "Run one retrieval; returns the transcript as a dict");

    m.def(
        "verify_codes",
        [](const py::dict& config, bool inject_fault) {
            return json_to_py(verify_codes(config_from_dict(config), inject_fault).to_json());
        },
        py::arg("config"), py::arg("inject_fault") = false);

    m.def(
        "audit_privacy",
        [](const py::dict& config, std::vector<size_t> subset, size_t empirical) {
            return json_to_py(
                audit_user_privacy(config_from_dict(config), std::move(subset), empirical)
                    .to_json());
        },
        py::arg("config"), py::arg("subset") = std::vector<size_t>{},
        py::arg("empirical") = size_t{0});

    m.def(
        "audit_secrecy",
        [](const py::dict& config, size_t trials, bool inject_fault) {
            return json_to_py(
                audit_server_secrecy(config_from_dict(config), trials, inject_fault).to_json());
        },
        py::arg("config"), py::arg("trials") = size_t{100}, py::arg("inject_fault") = false);

    m.def(
        "oracle_check",
        [](const py::dict& config, size_t rounds) {
            return json_to_py(oracle_check(config_from_dict(config), rounds).to_json());
        },
        py::arg("config"), py::arg("rounds") = size_t{50});

    m.def(
        "two_server_example",
        [](size_t files, uint64_t seed) {
            return json_to_py(two_server_example(files, seed).to_json());
        },
        py::arg("files") = size_t{3}, py::arg("seed") = uint64_t{0});

    m.def(
        "capacity_table",
        [](const std::vector<std::array<size_t, 3>>& grid) {
            return json_to_py(capacity_rows_to_json(capacity_rows(grid)));
        },
        py::arg("grid"));
}
