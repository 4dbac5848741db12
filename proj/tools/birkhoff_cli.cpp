// Batch front end: periodic-orbit scans, certified target hits, lattice
// diagnostics and certificate replay for hyperbolic toral automorphisms.
//
// Exit codes: 0 success, 1 usage/config errors, 2 cap exceeded,
// 3 obstructed (lattice evidence printed), 4 hypothesis violation,
// 5 certificate verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "birkhoff/certificate.hpp"
#include "birkhoff/config.hpp"
#include "birkhoff/targeter.hpp"

namespace {

using namespace birkhoff;

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::pair<BigRat, BigRat> parse_window(const std::string& spec) {
    auto dots = spec.find("..");
    if (dots == std::string::npos)
        throw ParseError("window must be 'lo..hi', got '" + spec + "'");
    BigRat lo = parse_rational(spec.substr(0, dots));
    BigRat hi = parse_rational(spec.substr(dots + 2));
    if (!(hi > lo)) throw ParseError("window is empty: " + spec);
    return {lo, hi};
}

TorusPoint parse_point(const std::string& spec, unsigned long D) {
    auto comma = spec.find(',');
    if (comma == std::string::npos)
        throw ParseError("point must be 'x1,x2', got '" + spec + "'");
    return TorusPoint::from_rational(parse_rational(spec.substr(0, comma)),
                                     parse_rational(spec.substr(comma + 1)), D);
}

int cmd_scan(const std::string& config_path, long period_max, const std::string& window,
             long bins, const std::string& out_path, std::string hist_path) {
    SystemConfig cfg = load_config(config_path);
    if (period_max > 0) cfg.period_max = period_max;
    auto [lo, hi] = parse_window(window);
    ScanResult res = scan_density(cfg.A, cfg.phi, cfg.period_max, lo, hi, bins,
                                  cfg.target.enum_cap, cfg.eig.D, cfg.target.precision);

    std::ostringstream orbits;
    orbits << "period,x1,x2,birkhoff_sum_lo,birkhoff_sum_hi\n";
    for (const auto& row : res.rows)
        orbits << row.orbit.period << "," << rat_to_string(row.orbit.point.x1.rat_part()) << ","
               << rat_to_string(row.orbit.point.x2.rat_part()) << "," << fmt_double(row.sum.lo_d())
               << "," << fmt_double(row.sum.hi_d()) << "\n";
    write_text_atomic(out_path, orbits.str());

    if (hist_path.empty()) hist_path = out_path + ".hist.csv";
    std::ostringstream histogram;
    histogram << "bin_lo,bin_hi,count\n";
    double wlo = Interval::from_rat(lo, 64).lo_d();
    double whi = Interval::from_rat(hi, 64).hi_d();
    for (std::size_t b = 0; b < res.histogram.size(); ++b) {
        double blo = wlo + (whi - wlo) * static_cast<double>(b) / static_cast<double>(bins);
        double bhi = wlo + (whi - wlo) * static_cast<double>(b + 1) / static_cast<double>(bins);
        histogram << fmt_double(blo) << "," << fmt_double(bhi) << "," << res.histogram[b] << "\n";
    }
    write_text_atomic(hist_path, histogram.str());

    std::cout << "orbits: " << res.rows.size() << "\n";
    std::cout << "max_gap: " << fmt_double(res.max_gap) << "\n";
    return 0;
}

int cmd_hit(const std::string& config_path, const std::string& target, const std::string& eps,
            const std::string& p_spec, const std::string& q_spec, const std::string& cert_path,
            long rescan) {
    SystemConfig cfg = load_config(config_path);
    if (rescan >= 0) cfg.target.rescan_period_max = rescan;
    BigRat K0 = parse_rational(target);
    BigRat epsilon = parse_rational(eps);

    PeriodicPoint p = make_periodic(cfg.A, parse_point(p_spec, cfg.eig.D), cfg.target.period_max);
    PeriodicPoint q = make_periodic(cfg.A, parse_point(q_spec, cfg.eig.D), cfg.target.period_max);

    TargetOutcome out = hit_target(cfg.A, cfg.phi, p, q, K0, epsilon, cfg.target);
    switch (out.status) {
        case TargetStatus::Success: {
            const TargetCertificate& c = out.cert;
            if (!cert_path.empty())
                write_text_atomic(cert_path, certificate_to_json(c).dump(2) + "\n");
            for (const auto& r : c.rounds)
                std::cout << "round: k=" << r.k << " m_k=" << r.m_k.get_str()
                          << " n_k=" << r.n_k.get_str() << " L=" << r.L
                          << " delta=" << fmt_double(r.delta)
                          << " shadow_budget=" << fmt_double(r.shadow_budget) << "\n";
            std::cout << "verdict: " << c.verdict << "\n";
            std::cout << "z: (" << rat_to_string(c.shadow.z.point.x1.rat_part()) << ", "
                      << rat_to_string(c.shadow.z.point.x2.rat_part()) << ")\n";
            std::cout << "L: " << c.plan.L << "  min_period: " << c.min_period << "\n";
            std::cout << "sum: [" << fmt_double(c.sum_L.lo_d()) << ", "
                      << fmt_double(c.sum_L.hi_d()) << "]\n";
            std::cout << "window: (" << rat_to_string(c.K0 - c.eps) << ", "
                      << rat_to_string(c.K0 + c.eps) << ")\n";
            return 0;
        }
        case TargetStatus::Obstructed: {
            std::cout << "verdict: obstructed\n";
            std::cout << "best_gap: " << fmt_double(out.obstruction.best_gap) << "\n";
            if (out.lattice.verdict == LatticeVerdict::Lattice)
                std::cout << "lattice: c = " << fmt_double(out.lattice.c) << "\n";
            for (const auto& e : out.obstruction.evidence)
                std::cout << "near_miss: value " << fmt_double(e.value) << " (m=" << e.m.get_str()
                          << ", n=" << e.n.get_str() << ")\n";
            std::cout << out.message << "\n";
            return 3;
        }
        case TargetStatus::HypothesisViolation:
            std::cout << "verdict: hypothesis violation\n" << out.message << "\n";
            return 4;
    }
    return 1;
}

int cmd_lattice(const std::string& config_path, long period_max, double tol) {
    SystemConfig cfg = load_config(config_path);
    if (period_max > 0) cfg.period_max = period_max;

    std::vector<Interval> sums;
    for (long n = 1; n <= cfg.period_max; ++n) {
        auto res = enumerate_periodic(cfg.A, n, cfg.target.enum_cap, cfg.eig.D);
        for (const auto& orbit : res.orbits) {
            if (orbit.period != n) continue;
            sums.push_back(birkhoff_sum(cfg.phi, orbit, cfg.target.precision).sum);
        }
    }
    LatticeResult res = detect_lattice(sums, tol);
    switch (res.verdict) {
        case LatticeVerdict::AllZero:
            std::cout << "all sums vanish\n";
            break;
        case LatticeVerdict::Lattice:
            std::cout << "lattice detected: c = " << fmt_double(res.c) << "\n";
            break;
        case LatticeVerdict::None:
            std::cout << "no lattice structure detected at tol " << fmt_double(tol) << "\n";
            break;
    }
    return 0;
}

int cmd_verify(const std::string& cert_path, long precision) {
    std::ifstream in(cert_path);
    if (!in) throw ParseError("cannot open certificate '" + cert_path + "'");
    nlohmann::json j = nlohmann::json::parse(in);  // syntax errors are usage errors (exit 1)

    // anything wrong with the content from here on is a failed verification
    try {
        TargetCertificate cert = certificate_from_json(j);
        mpfr_prec_t prec = precision > 0 ? precision : cert.precision;
        VerifyReport rep = verify_certificate(cert, prec);
        for (const auto& name : rep.passed) std::cout << "ok: " << name << "\n";
        if (!rep.ok) {
            std::cout << "FAILED: " << rep.first_failure << "\n";
            return 5;
        }
        std::cout << "certificate verified at precision " << prec << "\n";
        return 0;
    } catch (const Error& e) {
        std::cout << "FAILED: " << e.what() << "\n";
        return 5;
    } catch (const nlohmann::json::exception& e) {
        std::cout << "FAILED: malformed certificate: " << e.what() << "\n";
        return 5;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Birkhoff sums along periodic orbits of hyperbolic toral automorphisms"};
    app.require_subcommand(1);

    std::string config_path, window = "-5..5", out_path = "scan.csv", hist_path;
    std::string target, eps = "0.1", p_spec, q_spec, cert_path;
    long period_max = 0, bins = 50, rescan = -1, precision = 0;
    double tol = 1e-9;

    auto* scan = app.add_subcommand("scan", "Birkhoff sums of all orbits up to a period");
    scan->add_option("--config", config_path, "system config file")->required();
    scan->add_option("--period-max", period_max, "maximal minimal period");
    scan->add_option("--window", window, "sum window 'lo..hi'");
    scan->add_option("--bins", bins, "histogram bins");
    scan->add_option("--out", out_path, "orbit CSV path")->required();
    scan->add_option("--hist-out", hist_path, "histogram CSV path (default <out>.hist.csv)");

    auto* hit = app.add_subcommand("hit", "construct a periodic point with sum near a target");
    hit->add_option("--config", config_path, "system config file")->required();
    hit->add_option("--target", target, "target value K0 (rational or decimal)")->required();
    hit->add_option("--eps", eps, "window half-width");
    hit->add_option("--p", p_spec, "negative-sum periodic point 'x1,x2'")->required();
    hit->add_option("--q", q_spec, "positive-sum periodic point 'x1,x2'")->required();
    hit->add_option("--cert", cert_path, "certificate JSON output path");
    hit->add_option("--rescan-period-max", rescan, "enable the alternate-orbit rescan path");

    auto* lattice = app.add_subcommand("lattice", "detect lattice structure in the sums");
    lattice->add_option("--config", config_path, "system config file")->required();
    lattice->add_option("--period-max", period_max, "maximal minimal period");
    lattice->add_option("--tol", tol, "detection tolerance");

    auto* verify = app.add_subcommand("verify", "replay a stored certificate");
    verify->add_option("--cert", cert_path, "certificate JSON path")->required();
    verify->add_option("--precision", precision, "replay precision in bits");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (scan->parsed()) return cmd_scan(config_path, period_max, window, bins, out_path, hist_path);
        if (hit->parsed()) return cmd_hit(config_path, target, eps, p_spec, q_spec, cert_path, rescan);
        if (lattice->parsed()) return cmd_lattice(config_path, period_max, tol);
        if (verify->parsed()) return cmd_verify(cert_path, precision);
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
