// Acceptance suite: one criterion per run block, each printing PASS or FAIL.
// Usage: acceptance [--only N] [--cli PATH]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "birkhoff/certificate.hpp"
#include "birkhoff/config.hpp"
#include "birkhoff/targeter.hpp"

using namespace birkhoff;

namespace {

const IntMat2 kCat{2, 1, 1, 1};
std::string g_cli = BIRKHOFF_CLI_PATH;

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TorusPoint rat_point(long n1, long d1, long n2, long d2, unsigned long D) {
    return TorusPoint::from_rational(make_rat(n1, d1), make_rat(n2, d2), D);
}

int run_shell(const std::string& cmd, std::string& output) {
    std::string out_file = "acceptance_scratch/shell_out.txt";
    int status = std::system((cmd + " > " + out_file + " 2>&1").c_str());
    std::ifstream in(out_file);
    std::stringstream buf;
    buf << in.rdbuf();
    output = buf.str();
    return (status >= 256) ? status / 256 : status;
}

// 1. Periodic-point census for n = 1..10 against the det oracle.
Check criterion1() {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    EigenData eig = eigen_data(kCat);
    const long expected[10] = {1, 5, 16, 45, 121, 320, 841, 2205, 5776, 15125};
    for (long n = 1; n <= 10; ++n) {
        auto res = enumerate_periodic(kCat, n, BigInt(1000000), eig.D);
        // independent oracle: naive-product determinant of A^n - I
        IntMat2 p = IntMat2::identity();
        for (long i = 0; i < n; ++i) p = p * kCat;
        BigInt det = (p.a - 1) * (p.d - 1) - p.b * p.c;
        c.require(res.fixed_point_count == expected[n - 1],
                  "count mismatch at n=" + std::to_string(n));
        c.require(res.fixed_point_count == abs(det), "det oracle mismatch at n=" + std::to_string(n));
        BigInt total = 0;
        for (const auto& o : res.orbits) total += o.period;
        c.require(total == res.fixed_point_count, "orbit grouping loses points");
    }
    double dt = seconds_since(t0);
    c.require(dt < 10.0, "runtime " + std::to_string(dt) + "s exceeds 10s");
    return c;
}

// 2. The hypothesis instance: sums 1, (sqrt5-1)/2, -(sqrt5+1)/2 to 1e-9.
Check criterion2() {
    Check c;
    EigenData eig = eigen_data(kCat);
    TrigPolynomial phi = parse_observable("cos 1 0 1");
    mpfr_prec_t p = 128;

    PeriodicPoint fixed = make_periodic(kCat, rat_point(0, 1, 0, 1, eig.D), 4);
    Interval s0 = birkhoff_sum(phi, fixed, p).sum;
    c.require(s0.contains(BigRat(1)) && s0.width_d() < 1e-9, "sum at the fixed point");

    PeriodicPoint q = make_periodic(kCat, rat_point(1, 5, 2, 5, eig.D), 4);
    Interval sq = birkhoff_sum(phi, q, p).sum;
    Interval golden_minus = QuadExt(make_rat(-1, 2), make_rat(1, 2), eig.D).enclose(p);
    c.require(sq.intersects(golden_minus) && sq.width_d() < 1e-9, "sum on orbit(1/5,2/5)");

    PeriodicPoint pp = make_periodic(kCat, rat_point(2, 5, 4, 5, eig.D), 4);
    Interval sp = birkhoff_sum(phi, pp, p).sum;
    Interval golden_plus = QuadExt(make_rat(-1, 2), make_rat(-1, 2), eig.D).enclose(p);
    c.require(sp.intersects(golden_plus) && sp.width_d() < 1e-9, "sum on orbit(2/5,4/5)");

    c.require(sp.is_negative() && sq.is_positive(), "straddling of zero");
    return c;
}

// 3. Shadowing exactness on 50 randomized pseudo-orbits.
Check criterion3() {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    EigenData eig = eigen_data(kCat);
    PeriodicPoint origin = make_periodic(kCat, rat_point(0, 1, 0, 1, eig.D), 4);
    PeriodicPoint gp = make_periodic(kCat, rat_point(2, 5, 4, 5, eig.D), 4);
    PeriodicPoint gq = make_periodic(kCat, rat_point(1, 5, 2, 5, eig.D), 4);
    HeteroclinicPair homo = hetero_pair(origin, origin, eig, 2);
    HeteroclinicPair golden = hetero_pair(gp, gq, eig, 2);

    std::mt19937_64 rng(20240817);
    for (int i = 0; i < 50 && c.ok; ++i) {
        const HeteroclinicPair& pair = (i % 2 == 0) ? golden : homo;
        long unit = pair.p.period;
        std::uniform_int_distribution<long> pick(8 / unit, 64 / unit);
        long L1 = unit * pick(rng), L2 = unit * pick(rng);
        long L3 = unit * pick(rng), L4 = unit * pick(rng);
        PseudoOrbit po = build_pseudo_orbit(kCat, pair, L1, L2, L3, L4);
        ShadowCertificate cert = shadow_periodic(kCat, po);
        c.require(cert.z.point.is_rational(), "irrational shadow coordinates");
        IntMat2 AL = mat_pow(kCat, cert.L);
        BigRat w1 = BigRat(AL.a - 1) * cert.z.point.x1.rat_part() +
                    BigRat(AL.b) * cert.z.point.x2.rat_part();
        BigRat w2 = BigRat(AL.c) * cert.z.point.x1.rat_part() +
                    BigRat(AL.d - 1) * cert.z.point.x2.rat_part();
        c.require(w1.get_den() == 1 && w2.get_den() == 1, "(A^L - I) z not integral");
        c.require(cert.max_dist <= cert.mu * cert.delta, "mu delta bound");
    }
    // zero-seam inputs return the correction c = 0 exactly
    PseudoOrbit po0 = build_pseudo_orbit(kCat, degenerate_pair(origin, eig), 8, 8, 8, 8);
    ShadowCertificate cert0 = shadow_periodic(kCat, po0);
    c.require(cert0.z.point == origin.point && cert0.max_dist == 0.0, "zero-seam shadow");

    double dt = seconds_since(t0);
    c.require(dt < 60.0, "runtime " + std::to_string(dt) + "s exceeds 60s");
    return c;
}

// 4. Shadow decay: doubling all L_i scales the verified distance like lam^L0.
Check criterion4() {
    Check c;
    EigenData eig = eigen_data(kCat);
    PeriodicPoint gp = make_periodic(kCat, rat_point(2, 5, 4, 5, eig.D), 4);
    PeriodicPoint gq = make_periodic(kCat, rat_point(1, 5, 2, 5, eig.D), 4);
    HeteroclinicPair pair = hetero_pair(gp, gq, eig, 2);

    double dist[3];
    long base = 8;
    for (int s = 0; s < 3; ++s) {
        long l = base << s;
        PseudoOrbit po = build_pseudo_orbit(kCat, pair, l, l, l, l);
        dist[s] = shadow_periodic(kCat, po).max_dist;
    }
    for (int s = 0; s + 1 < 3; ++s) {
        long L0 = base << s;
        double lam_L0 = std::pow(eig.lam, static_cast<double>(L0));
        double ratio = dist[s + 1] / dist[s];
        c.require(ratio >= lam_L0 * 0.5 && ratio <= lam_L0 * 2.0,
                  "ratio " + std::to_string(ratio) + " outside [lam^L0/2, 2 lam^L0] at L0 = " +
                      std::to_string(L0));
    }
    return c;
}

// 5. Target hits at K0 in {-2, 0, 0.3, 5} with eps = 0.1, replayed by the CLI.
Check criterion5() {
    Check c;
    EigenData eig = eigen_data(kCat);
    TrigPolynomial phi = parse_observable("cos 1 0 1");
    PeriodicPoint p = make_periodic(kCat, rat_point(2, 5, 4, 5, eig.D), 4);
    PeriodicPoint q = make_periodic(kCat, rat_point(1, 5, 2, 5, eig.D), 4);
    BigRat eps = make_rat(1, 10);

    std::system("mkdir -p acceptance_scratch");
    for (const char* k0_text : {"-2", "0", "0.3", "5"}) {
        auto t0 = std::chrono::steady_clock::now();
        BigRat K0 = parse_rational(k0_text);
        TargetOutcome out = hit_target(kCat, phi, p, q, K0, eps);
        c.require(out.status == TargetStatus::Success,
                  std::string("no certificate at K0 = ") + k0_text);
        if (out.status != TargetStatus::Success) break;
        c.require(out.cert.sum_L.strictly_inside(K0 - eps, K0 + eps),
                  std::string("sum enclosure escapes the window at K0 = ") + k0_text);

        std::string cert_path = std::string("acceptance_scratch/cert_") + k0_text + ".json";
        write_text_atomic(cert_path, certificate_to_json(out.cert).dump(2) + "\n");
        std::string output;
        long doubled = 2 * out.cert.precision;
        int code = run_shell(g_cli + " verify --cert " + cert_path + " --precision " +
                                 std::to_string(doubled),
                             output);
        c.require(code == 0, std::string("cmd_verify replay failed at K0 = ") + k0_text + ": " +
                                 output);
        double dt = seconds_since(t0);
        c.require(dt < 300.0, std::string("run at K0 = ") + k0_text + " took " +
                                  std::to_string(dt) + "s");
    }
    return c;
}

// 6. Empirical density: the max gap over [-5,5] shrinks as periods deepen.
Check criterion6() {
    Check c;
    EigenData eig = eigen_data(kCat);
    TrigPolynomial phi = parse_observable("cos 1 0 1");
    std::vector<double> gaps;
    for (long pm : {6L, 8L, 10L, 12L}) {
        ScanResult s = scan_density(kCat, phi, pm, BigRat(-5), BigRat(5), 50, BigInt(1000000),
                                    eig.D, 96);
        gaps.push_back(s.max_gap);
    }
    for (std::size_t i = 1; i < gaps.size(); ++i)
        c.require(gaps[i] <= gaps[i - 1] * (1 + 1e-12),
                  "gap grew from period_max " + std::to_string(4 + 2 * i));
    c.require(gaps[3] * 2 <= gaps[0],
              "gap did not halve: " + std::to_string(gaps[0]) + " -> " + std::to_string(gaps[3]));
    return c;
}

// 7. Lattice obstruction for the coboundary observable psi o f - psi + 1/2.
Check criterion7() {
    Check c;
    EigenData eig = eigen_data(kCat);
    TrigPolynomial psi = parse_observable("sin 0 1 3/10");
    TrigPolynomial phi = compose_with(psi, kCat) - psi + parse_observable("const 1/2");

    for (long n = 1; n <= 8; ++n) {
        auto res = enumerate_periodic(kCat, n, BigInt(1000000), eig.D);
        for (const auto& orbit : res.orbits) {
            if (orbit.period != n) continue;
            Interval s = birkhoff_sum(phi, orbit, 128).sum;
            c.require(s.contains(make_rat(orbit.period, 2)) && s.width_d() < 1e-8,
                      "sum at period " + std::to_string(n) + " is not pi(z)/2");
        }
    }

    std::system("mkdir -p acceptance_scratch");
    std::ofstream cfg("acceptance_scratch/cob.cfg");
    cfg << "matrix = 2 1 1 1\n"
        << "observable = " << "sin 1 1 3/10\n"
        << "observable = sin 0 1 -3/10\n"
        << "observable = const 1/2\n";
    cfg.close();

    std::string output;
    int code = run_shell(g_cli + " lattice --config acceptance_scratch/cob.cfg --period-max 8 "
                                 "--tol 1e-9",
                         output);
    c.require(code == 0, "cmd_lattice exit code " + std::to_string(code));
    double detected = 0;
    if (auto pos = output.find("c = "); pos != std::string::npos)
        detected = std::strtod(output.c_str() + pos + 4, nullptr);
    c.require(std::fabs(detected - 0.5) < 1e-6, "lattice constant " + std::to_string(detected));

    code = run_shell(g_cli + " hit --config acceptance_scratch/cob.cfg --target 0.77 --eps 0.01 "
                             "--p 2/5,4/5 --q 1/5,2/5",
                     output);
    c.require(code == 3, "cmd_hit exit code " + std::to_string(code) + " (want 3)");
    double best_gap = 0;
    if (auto pos = output.find("best_gap: "); pos != std::string::npos)
        best_gap = std::strtod(output.c_str() + pos + 10, nullptr);
    c.require(std::fabs(best_gap - 0.5) < 1e-6, "best_gap " + std::to_string(best_gap));
    return c;
}

// 8. Diophantine unit anchors and the brute-force agreement sweep.
Check criterion8() {
    Check c;
    c.require(gap(make_rat(-3, 4), make_rat(1, 2)) == make_rat(1, 4), "gap(-3/4, 1/2)");

    mpfr_prec_t p = 128;
    ComboQuery golden;
    golden.a = QuadExt(make_rat(-1, 2), make_rat(-1, 2), 5).enclose(p);
    golden.b = QuadExt(make_rat(-1, 2), make_rat(1, 2), 5).enclose(p);
    golden.target = make_rat(1, 20);
    golden.half_width = make_rat(1, 20);
    golden.k_min = 1;
    ComboResult r = search_combo(golden);
    c.require(r.found && r.m >= 1 && r.n >= 1, "golden window search failed");
    if (r.found)
        c.require(r.value.strictly_inside(BigRat(0), make_rat(1, 10)),
                  "golden combination outside (0, 0.1)");

    std::mt19937_64 rng(31337);
    auto rand_rat = [&](long lo, long hi, long dmax) {
        std::uniform_int_distribution<long> num(lo, hi);
        std::uniform_int_distribution<long> den(1, dmax);
        return make_rat(num(rng), den(rng));
    };
    for (int i = 0; i < 100 && c.ok; ++i) {
        BigRat a = -rand_rat(1, 10, 8), b = rand_rat(1, 10, 8);
        BigRat t = rand_rat(-30, 30, 4), w = rand_rat(1, 1, 30);
        ComboQuery q;
        q.a_exact = a;
        q.b_exact = b;
        q.a = Interval::from_rat(a, p);
        q.b = Interval::from_rat(b, p);
        q.target = t;
        q.half_width = w;
        ComboResult res = search_combo(q);

        bool brute = false;
        for (long m = 1; m <= 1000 && !brute; ++m) {
            BigRat ideal = (t - BigRat(m) * a) / b;
            BigInt n_lo = floor_rat(ideal);
            for (BigInt n : {n_lo, BigInt(n_lo + 1)}) {
                if (n < 1) continue;
                BigRat v = BigRat(m) * a + BigRat(n) * b;
                if (v > t - w && v < t + w) brute = true;
            }
        }
        if (res.found) {
            BigRat v = BigRat(res.m) * a + BigRat(res.n) * b;
            c.require(v > t - w && v < t + w, "reported combination is outside the window");
        } else {
            c.require(!brute, "search missed a window the brute force can reach");
        }
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
        if (arg == "--cli" && i + 1 < argc) g_cli = argv[++i];
    }
    std::system("mkdir -p acceptance_scratch");

    std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"criterion-1 periodic-point census", criterion1},
        {"criterion-2 hypothesis instance", criterion2},
        {"criterion-3 shadowing exactness", criterion3},
        {"criterion-4 shadow decay", criterion4},
        {"criterion-5 target hits", criterion5},
        {"criterion-6 empirical density", criterion6},
        {"criterion-7 lattice obstruction", criterion7},
        {"criterion-8 diophantine anchors", criterion8},
    };

    bool all_ok = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %s%s%s\n", c.ok ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    c.ok ? "" : " -- ", c.ok ? "" : c.detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && c.ok;
    }
    return all_ok ? 0 : 1;
}
