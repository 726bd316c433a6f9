#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../conformal.hpp"
#include "../error.hpp"
#include "../fem/domains.hpp"

namespace spectral_shapes {

namespace config_detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline double to_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        require(pos == s.size(), what + ": trailing characters in '" + s + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (...) {
        throw Error(what + ": cannot parse number '" + s + "'");
    }
}

}  // namespace config_detail

// Line-oriented `key=value` text. '#' starts a comment; blank lines are
// skipped; later duplicates overwrite earlier ones.
struct KeyValueConfig {
    std::map<std::string, std::string> entries;

    static KeyValueConfig parse(std::istream& is) {
        KeyValueConfig cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = config_detail::trim(line);
            if (line.empty()) continue;
            size_t eq = line.find('=');
            require(eq != std::string::npos, "config: missing '=' at line " +
                                                 std::to_string(lineno) + ": " + line);
            std::string key = config_detail::trim(line.substr(0, eq));
            require(!key.empty(), "config: empty key at line " + std::to_string(lineno));
            cfg.entries[key] = config_detail::trim(line.substr(eq + 1));
        }
        return cfg;
    }

    static KeyValueConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        require(in.good(), "config: cannot open " + path);
        return parse(in);
    }

    bool has(const std::string& key) const { return entries.count(key) > 0; }

    std::string get(const std::string& key, const std::string& fallback) const {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : it->second;
    }

    std::string get_required(const std::string& key) const {
        auto it = entries.find(key);
        require(it != entries.end(), "config: missing required key '" + key + "'");
        return it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        return config_detail::to_double(it->second, "config key '" + key + "'");
    }

    int get_int(const std::string& key, int fallback) const {
        double v = get_double(key, fallback);
        int i = static_cast<int>(v);
        require(i == v, "config key '" + key + "': expected an integer");
        return i;
    }

    uint64_t get_u64(const std::string& key, uint64_t fallback) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        try {
            return std::stoull(it->second);
        } catch (...) {
            throw Error("config key '" + key + "': cannot parse '" + it->second + "'");
        }
    }

    std::vector<double> get_doubles(const std::string& key,
                                    std::vector<double> fallback) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        std::vector<double> out;
        for (auto& piece : config_detail::split(it->second, ','))
            if (!piece.empty())
                out.push_back(config_detail::to_double(piece, "config key '" + key + "'"));
        require(!out.empty(), "config key '" + key + "': empty list");
        return out;
    }
};

// Density spec text: `const:<c>`, `exp_r2`, `wave:<a>` (boundary ripple
// 1 + a*Re(w)/(1+|w|)), or `file:<path>` where the file's single
// non-comment line holds one of the direct forms.
inline DensityField parse_density(const std::string& spec, int depth = 0) {
    require(depth < 4, "density: file indirection too deep");
    if (spec == "exp_r2") return DensityField::exp_r2();
    if (spec.rfind("const:", 0) == 0)
        return DensityField::constant(
            config_detail::to_double(spec.substr(6), "density const"));
    if (spec.rfind("wave:", 0) == 0) {
        double a = config_detail::to_double(spec.substr(5), "density wave");
        require(std::abs(a) < 1.0, "density wave: amplitude must satisfy |a| < 1");
        return DensityField::from_function(
            [a](Complex w) { return 1.0 + a * w.real() / (1.0 + std::abs(w)); },
            "wave:" + spec.substr(5));
    }
    if (spec.rfind("file:", 0) == 0) {
        std::string path = spec.substr(5);
        std::ifstream in(path);
        require(in.good(), "density: referenced file does not exist: " + path);
        std::string line, found;
        while (std::getline(in, line)) {
            size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = config_detail::trim(line);
            if (line.empty()) continue;
            require(found.empty(), "density file " + path + ": more than one spec line");
            found = line;
        }
        require(!found.empty(), "density file " + path + ": no spec line");
        return parse_density(found, depth + 1);
    }
    require(false, "density: unknown spec '" + spec + "'");
    return DensityField::constant(1.0);
}

// One corpus entry: a polynomial conformal image of the disk handled by the
// spectral solvers, or a meshed polygon handled by the P1 solvers.
struct DomainSpec {
    enum class Kind { Polymap, Polygon };

    std::string id;
    Kind kind = Kind::Polymap;
    std::optional<ConformalMap> map;
    std::optional<DomainFamily> family;
    double mesh_h = 0.05;
    DensityField density = DensityField::constant(1.0);
    DensityField boundary_density = DensityField::constant(1.0);

    static DomainSpec from_config(const KeyValueConfig& cfg, const std::string& id) {
        DomainSpec d;
        d.id = id;
        std::string kind = cfg.get_required("kind");
        if (kind == "polymap") {
            d.kind = Kind::Polymap;
            std::vector<Complex> coeff;
            for (auto& pair : config_detail::split(cfg.get_required("coeffs"), ';')) {
                if (pair.empty()) continue;
                auto parts = config_detail::split(pair, ',');
                require(parts.size() == 2, "domain spec: coeff needs 're,im': " + pair);
                coeff.emplace_back(config_detail::to_double(parts[0], "coeff re"),
                                   config_detail::to_double(parts[1], "coeff im"));
            }
            d.map.emplace(std::move(coeff));
        } else if (kind == "polygon") {
            d.kind = Kind::Polygon;
            std::string fam = cfg.get_required("family");
            auto parts = config_detail::split(fam, ':');
            auto num = [&](size_t i) {
                require(parts.size() > i, "domain spec: family '" + fam +
                                              "' is missing a parameter");
                return config_detail::to_double(parts[i], "family parameter");
            };
            if (parts[0] == "disk_polygon")
                d.family = DomainFamily::disk_polygon(static_cast<int>(num(1)));
            else if (parts[0] == "ellipse")
                d.family =
                    DomainFamily::ellipse(num(1), num(2), static_cast<int>(num(3)));
            else if (parts[0] == "square")
                d.family = DomainFamily::square();
            else if (parts[0] == "two_disks_passage")
                d.family = DomainFamily::two_disks_passage(num(1), num(2));
            else if (parts[0] == "two_disks_overlap")
                d.family = DomainFamily::two_disks_overlap(num(1));
            else
                require(false, "domain spec: unknown family '" + parts[0] + "'");
            d.mesh_h = cfg.get_double("mesh_h", 0.05);
        } else {
            require(false, "domain spec: unknown kind '" + kind + "'");
        }
        if (cfg.has("density")) d.density = parse_density(cfg.get_required("density"));
        if (cfg.has("boundary_density"))
            d.boundary_density = parse_density(cfg.get_required("boundary_density"));
        return d;
    }

    static DomainSpec from_file(const std::string& path) {
        DomainSpec d = from_config(KeyValueConfig::parse_file(path), path);
        size_t slash = path.find_last_of('/');
        std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
        size_t dot = base.find_last_of('.');
        d.id = dot == std::string::npos ? base : base.substr(0, dot);
        return d;
    }
};

// Batch-run settings: which corpus, which problems, sweep lists, solver
// resolutions, output location, seed.
struct ExperimentConfig {
    enum class Problem { Neumann, Steklov, Both };

    Problem problem = Problem::Both;
    std::vector<DomainSpec> corpus;
    std::vector<double> eps{0.2, 0.1, 0.05};
    double passage_length = 0.5;
    int neumann_degree = 20;
    int steklov_degree = 64;
    double mesh_h = 0.05;
    uint64_t seed = 0;
    std::string out_dir = ".";

    void validate() const {
        require(!eps.empty(), "config: eps list is empty");
        for (double e : eps)
            require(e > 0.0 && e <= 0.5, "config: eps values must lie in (0, 0.5]");
        for (size_t i = 1; i < eps.size(); ++i)
            require(eps[i] < eps[i - 1], "config: eps list must be strictly descending");
        require(passage_length > 0.0, "config: passage length must be positive");
        require(neumann_degree >= 2 && neumann_degree <= 40,
                "config: neumann_degree out of range");
        require(steklov_degree >= 2 && steklov_degree <= 400,
                "config: steklov_degree out of range");
        require(mesh_h > 0.0, "config: mesh_h must be positive");
    }

    static ExperimentConfig from_key_values(const KeyValueConfig& cfg);
};

}  // namespace spectral_shapes
