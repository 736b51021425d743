#include "concordia/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

namespace concordia {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

}  // namespace

CsvError::CsvError(int line_, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_) + ": " + message), line(line_) {}

Sample read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);

    std::vector<double> x1, x2;
    std::string line;
    int line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 2)
            throw CsvError(line_no, "expected 2 columns, found " + std::to_string(cells.size()));
        double a = 0.0, b = 0.0;
        bool ok = parse_double(cells[0], a) && parse_double(cells[1], b);
        if (!ok) {
            if (first_content_line) {
                first_content_line = false;  // header row
                continue;
            }
            const std::string& bad = parse_double(cells[0], a) ? cells[1] : cells[0];
            throw CsvError(line_no, "non-numeric cell '" + bad + "'");
        }
        first_content_line = false;
        x1.push_back(a);
        x2.push_back(b);
    }
    if (x1.size() < 2)
        throw CsvError(line_no, "need at least 2 data rows, found " + std::to_string(x1.size()));
    return Sample(std::move(x1), std::move(x2));
}

nlohmann::ordered_json copula_to_json(const Copula& c) {
    nlohmann::ordered_json j;
    switch (c.kind()) {
        case Copula::Kind::M: j["kind"] = "M"; break;
        case Copula::Kind::W: j["kind"] = "W"; break;
        case Copula::Kind::Pi: j["kind"] = "Pi"; break;
        case Copula::Kind::E: j["kind"] = "E"; break;
        case Copula::Kind::Grid: {
            const GridCopula& g = c.as_grid();
            j["kind"] = "grid";
            j["resolution"] = g.resolution();
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (int i = 0; i < g.resolution(); ++i) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (int k = 0; k < g.resolution(); ++k) row.push_back(g.cell_mass(i, k));
                rows.push_back(row);
            }
            j["mass"] = rows;
            break;
        }
        case Copula::Kind::Mixture: {
            j["kind"] = "mixture";
            nlohmann::ordered_json comps = nlohmann::ordered_json::array();
            for (const auto& [w, sub] : c.parts())
                comps.push_back({{"weight", w}, {"copula", copula_to_json(sub)}});
            j["components"] = comps;
            break;
        }
        case Copula::Kind::Transformed: {
            j["kind"] = "transformed";
            j["element"] = group::name_of(c.transform_element());
            j["copula"] = copula_to_json(c.transform_base());
            break;
        }
    }
    return j;
}

Copula copula_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw std::invalid_argument("copula spec: missing string field 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "M") return Copula::M();
    if (kind == "W") return Copula::W();
    if (kind == "Pi") return Copula::Pi();
    if (kind == "E") return Copula::E();
    if (kind == "grid") {
        if (!j.contains("mass") || !j["mass"].is_array())
            throw std::invalid_argument("grid spec: missing array field 'mass'");
        const auto& rows = j["mass"];
        const int m = static_cast<int>(rows.size());
        std::vector<double> mass;
        mass.reserve(static_cast<size_t>(m) * m);
        for (const auto& row : rows) {
            if (!row.is_array() || static_cast<int>(row.size()) != m)
                throw std::invalid_argument("grid spec: 'mass' must be a square matrix");
            for (const auto& v : row) mass.push_back(v.get<double>());
        }
        if (j.contains("resolution") && j["resolution"].get<int>() != m)
            throw std::invalid_argument("grid spec: 'resolution' disagrees with matrix size");
        return Copula::grid(GridCopula(m, std::move(mass)));
    }
    if (kind == "mixture") {
        if (!j.contains("components") || !j["components"].is_array())
            throw std::invalid_argument("mixture spec: missing array field 'components'");
        std::vector<std::pair<double, Copula>> parts;
        for (const auto& comp : j["components"])
            parts.emplace_back(comp.at("weight").get<double>(), copula_from_json(comp.at("copula")));
        return Copula::mixture(std::move(parts));
    }
    if (kind == "transformed") {
        auto elem = group::from_name(j.at("element").get<std::string>());
        if (!elem)
            throw std::invalid_argument("transformed spec: unknown element '" +
                                        j.at("element").get<std::string>() + "'");
        return copula_from_json(j.at("copula")).transform_by(*elem);
    }
    throw std::invalid_argument("copula spec: unknown kind '" + kind + "'");
}

Copula load_copula_spec(const std::string& name_or_path) {
    if (name_or_path == "M") return Copula::M();
    if (name_or_path == "W") return Copula::W();
    if (name_or_path == "Pi") return Copula::Pi();
    if (name_or_path == "E") return Copula::E();
    std::ifstream in(name_or_path);
    if (!in)
        throw std::runtime_error("copula spec '" + name_or_path +
                                 "' is neither a builtin name (M, W, Pi, E) nor a readable file");
    nlohmann::json j;
    in >> j;
    return copula_from_json(j);
}

ConcordanceGenerator resolve_generator(const std::string& spec) {
    if (auto g = parse_generator(spec)) return *g;
    Copula a = load_copula_spec(spec);
    return make_generator(std::move(a), spec);
}

nlohmann::ordered_json estimate_report_to_json(const EstimateReport& rep) {
    nlohmann::ordered_json j;
    j["schema"] = "concordia.estimate.v1";
    j["n"] = rep.n;
    j["generator"] = rep.generator;
    j["n_A"] = rep.n_a;
    j["valid"] = rep.valid;
    j["c_form"] = rep.c_form;
    j["m_form"] = rep.m_form;
    j["w_form"] = rep.w_form;
    j["kappa_hat"] = rep.kappa_hat;
    return j;
}

StudyConfig study_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("study config must be a JSON object");
    for (const char* field : {"generator", "copula", "sizes", "replications", "seed"})
        if (!j.contains(field))
            throw std::invalid_argument(std::string("study config: missing field '") + field + "'");

    nlohmann::ordered_json copula_echo;
    Copula target = [&] {
        if (j["copula"].is_string()) {
            copula_echo = j["copula"].get<std::string>();
            return load_copula_spec(j["copula"].get<std::string>());
        }
        copula_echo = nlohmann::ordered_json::parse(j["copula"].dump());
        return copula_from_json(j["copula"]);
    }();

    StudyConfig cfg{resolve_generator(j["generator"].get<std::string>()),
                    j["generator"].get<std::string>(),
                    std::move(target),
                    std::move(copula_echo),
                    j["sizes"].get<std::vector<int>>(),
                    j["replications"].get<int>(),
                    j["seed"].get<std::uint64_t>(),
                    256};
    if (j.contains("materialize_resolution")) cfg.materialize_resolution = j["materialize_resolution"].get<int>();
    return cfg;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace concordia
