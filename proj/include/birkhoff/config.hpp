#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "birkhoff/errors.hpp"
#include "birkhoff/matrix.hpp"
#include "birkhoff/observable.hpp"
#include "birkhoff/targeter.hpp"

namespace birkhoff {

/// System description shared by all commands: the matrix, the observable,
/// the working precision and the resource caps.
struct SystemConfig {
    IntMat2 A;
    TrigPolynomial phi;
    EigenData eig;
    long period_max = 12;
    TargetConfig target;
};

/// Plain "key = value" text. Keys: matrix (four integers), observable (one
/// term directive per occurrence, may repeat), precision_bits, period_max,
/// L_max, search_bound, scan_max, enum_cap, hetero_radius, lattice_tol,
/// rescan_period_max. '#' starts a comment.
inline SystemConfig parse_config_text(const std::string& text) {
    SystemConfig cfg;
    bool have_matrix = false;
    std::string observable_lines;

    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::istringstream probe(line);
            std::string token;
            if (probe >> token) throw ParseError("config: expected 'key = value' in '" + line + "'");
            continue;
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        };
        trim(key);
        trim(value);
        if (key.empty()) throw ParseError("config: empty key");

        if (key == "matrix") {
            std::istringstream ms(value);
            std::string a, b, c, d, extra;
            if (!(ms >> a >> b >> c >> d) || (ms >> extra))
                throw ParseError("config: matrix needs exactly four integers");
            cfg.A = IntMat2{BigInt(a), BigInt(b), BigInt(c), BigInt(d)};
            have_matrix = true;
        } else if (key == "observable") {
            observable_lines += value + "\n";
        } else if (key == "precision_bits") {
            cfg.target.precision = std::stol(value);
            if (cfg.target.precision < 8) throw ParseError("config: precision_bits too small");
        } else if (key == "period_max") {
            cfg.period_max = std::stol(value);
        } else if (key == "L_max") {
            cfg.target.L_max = std::stol(value);
        } else if (key == "search_bound") {
            cfg.target.cf_bound = BigInt(value);
        } else if (key == "scan_max") {
            cfg.target.scan_max = std::stol(value);
        } else if (key == "enum_cap") {
            cfg.target.enum_cap = BigInt(value);
        } else if (key == "hetero_radius") {
            cfg.target.hetero_radius = std::stol(value);
        } else if (key == "lattice_tol") {
            cfg.target.lattice_tol = std::stod(value);
        } else if (key == "rescan_period_max") {
            cfg.target.rescan_period_max = std::stol(value);
        } else {
            throw ParseError("config: unknown key '" + key + "'");
        }
    }
    if (!have_matrix) throw ParseError("config: missing 'matrix'");
    if (observable_lines.empty()) throw ParseError("config: missing 'observable'");
    cfg.phi = parse_observable(observable_lines);
    BigInt det = cfg.A.det();
    if (det != 1 && det != -1) throw ParseError("config: matrix must have determinant +/-1");
    cfg.eig = eigen_data(cfg.A, cfg.target.precision);  // certifies hyperbolicity
    return cfg;
}

inline SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace birkhoff
