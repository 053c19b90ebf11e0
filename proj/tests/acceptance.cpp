// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "qwec/experiments.hpp"
#include "qwec/oracle.hpp"

using namespace qwec;
namespace ex = qwec::experiments;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double bloch_dev(const ex::Bloch& a, const ex::Bloch& b) {
    double d = 0;
    for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
    std::printf("%s criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

void criterion_table() {
    const auto t0 = Clock::now();
    const auto rows = ex::table_row_checks(code_basis());
    int walk_ok = 0, analytic_ok = 0;
    for (const auto& r : rows) {
        walk_ok += r.pass ? 1 : 0;
        analytic_ok += r.analytic == r.printed ? 1 : 0;
    }
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << walk_ok << "/" << rows.size() << " rows walk-reproduced, " << analytic_ok << "/" << rows.size()
      << " analytic, " << secs << " s";
    report(1, "syndrome table exactness", rows.size() == 15 && walk_ok == 15 && analytic_ok == 15 && secs < 10, d.str());
}

void criterion_gauge() {
    const auto& cb = code_basis();
    const PauliWord zx = PauliWord::on(Particle::P2, "IZI"), zc = PauliWord::on(Particle::P2, "ZII");
    const bool symbolic = cb.gauges[0] * cb.stabilizers[2] * zc == zx;

    std::mt19937_64 rng(2024);
    const auto basis = ex::encoded_basis();
    bool same_syndromes = true;
    double max_dev = 0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto [a, b] = ex::random_amplitudes(rng);
        const Session start = ex::encoded_state(basis, a, b);
        std::set<unsigned> synd[2];
        std::vector<ex::Bloch> readouts;
        const std::array<PauliWord, 2> errors{zx, zc};
        for (int k = 0; k < 2; ++k) {
            Session s = start;
            apply_pauli(s.state, errors[static_cast<std::size_t>(k)]);
            for (auto [br, p] : run_cycle_branches(s)) {
                synd[k].insert(br.history.cycles.back().m.bits());
                update_frame(br.history, br.frame);
                readouts.push_back(logical_readout(br).bloch);
            }
        }
        same_syndromes = same_syndromes && synd[0] == synd[1];
        for (const auto& r : readouts) max_dev = std::max(max_dev, bloch_dev(r, readouts.front()));
    }
    std::ostringstream d;
    d << "symbolic identity " << (symbolic ? "exact" : "broken") << ", syndromes "
      << (same_syndromes ? "identical" : "differ") << ", readout spread " << sci(max_dev);
    report(2, "gauge equivalence", symbolic && same_syndromes && max_dev < 1e-10, d.str());
}

void criterion_campaign() {
    const auto t0 = Clock::now();
    ex::Config c;
    c.command = "error-sweep";
    c.seed = 20240601;
    c.trials = 200;
    c.families = {ErrorFamily::coin, ErrorFamily::shift};
    const ex::Report r = ex::error_sweep(c);
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << r.json["summary"]["trials"].get<int>() << " trials, " << r.json["summary"]["failures"].get<int>()
      << " below tolerance, min fidelity 1 - " << sci(1.0 - r.json["summary"]["min_fidelity"].get<double>()) << ", "
      << secs << " s";
    report(3, "correctability campaign", r.pass && r.json["summary"]["trials"].get<int>() == 1200 && secs < 300,
           d.str());
}

void criterion_identities() {
    const auto w = ex::basis_transform_identity(DataFrame::unshifted);
    const auto cnot = ex::cnot_identity();
    const auto cphase = ex::cphase_identity();
    const auto middle = ex::middle_block_identity();
    const bool pass = w.deviation < 1e-12 && cnot.deviation < 1e-10 && cphase.deviation < 1e-10 &&
                      middle.deviation < 1e-10;
    std::ostringstream d;
    d << "(a) transform " << sci(w.deviation) << ", (b) CNOT " << sci(cnot.deviation) << ", (c) CPhase "
      << sci(cphase.deviation) << " [" << cphase.note << "], (d) middle block " << sci(middle.deviation);
    report(4, "operator identities", pass, d.str());
}

void criterion_clifford_t() {
    int symbolic_ok = 0;
    std::string broken;
    const auto criteria = ex::clifford_criteria();
    for (const auto& c : criteria) {
        symbolic_ok += c.modulo_gauge ? 1 : 0;
        if (!c.modulo_gauge) broken += (broken.empty() ? "" : "; ") + c.name;
    }

    const double r = 1.0 / std::sqrt(2.0);
    std::vector<std::pair<cplx, cplx>> states{{1.0, 0.0}, {0.0, 1.0}, {r, r}, {r, cplx(0, r)}};
    std::mt19937_64 rng(77);
    states.push_back(ex::random_amplitudes(rng));
    double worst = 0;
    std::string worst_case;
    for (const char* word : {"H", "S", "T"}) {
        for (std::size_t k = 0; k < states.size(); ++k) {
            const auto run = ex::run_gate_word(word, states[k].first, states[k].second, 1000 + k);
            if (run.deviation > worst) {
                worst = run.deviation;
                worst_case = std::string(word) + " on state " + std::to_string(k);
            }
        }
    }
    const auto t_plus = ex::run_gate_word("T", r, r, 5);
    const ex::Bloch t_want{std::cos(std::numbers::pi / 4), std::sin(std::numbers::pi / 4), 0};
    const auto tt_plus = ex::run_gate_word("T T", r, r, 6);
    const auto s_plus = ex::run_gate_word("S", r, r, 6);
    const double t_dev = bloch_dev(t_plus.got, t_want);
    const double tt_dev = std::max(bloch_dev(tt_plus.got, {0, 1, 0}), bloch_dev(tt_plus.got, s_plus.got));
    const bool pass = symbolic_ok == static_cast<int>(criteria.size()) && worst <= 1e-8 && t_dev <= 1e-8 &&
                      tt_dev <= 1e-8;
    std::ostringstream d;
    d << "symbolic " << symbolic_ok << "/" << criteria.size();
    if (!broken.empty()) d << " (fails: " << broken << ")";
    d << ", worst gate deviation " << sci(worst) << " (" << worst_case << "), T|+> -> (" << t_plus.got[0] << ", "
      << t_plus.got[1] << ", " << t_plus.got[2] << "), TT vs S " << sci(tt_dev);
    report(5, "logical Clifford+T", pass, d.str());
}

void criterion_qnd_deferred() {
    std::mt19937_64 rng(606);
    const auto basis = ex::encoded_basis();
    double worst_fid = 1;
    bool silent = true;
    for (int trial = 0; trial < 6; ++trial) {
        const auto [a, b] = ex::random_amplitudes(rng);
        const Session start = ex::encoded_state(basis, a, b);
        Session s = start;
        for (int cycle = 0; cycle < 2; ++cycle) {
            for (auto& [br, p] : run_cycle_branches(s)) silent = silent && br.history.cycles.back().m.bits() == 0;
            run_cycle(s, rng);
        }
        worst_fid = std::min(worst_fid, fidelity(s.state, start.state));
    }

    std::uniform_int_distribution<int> pick(0, 8), where(0, 2), count(1, 3), cycles(3, 4);
    double worst_gap = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto [a, b] = ex::random_amplitudes(rng);
        Session deferred = ex::encoded_state(basis, a, b);
        Session eager = deferred;
        const int n_cycles = cycles(rng);
        int flips_left = count(rng);
        for (int cycle = 0; cycle < n_cycles; ++cycle) {
            if (flips_left > 0 && (n_cycles - cycle <= flips_left || rng() % 2)) {
                const int k = pick(rng);
                const PauliWord flip =
                    PauliWord::single({kDataParticles[static_cast<std::size_t>(where(rng))], static_cast<Role>(k / 3)},
                                      "XYZ"[k % 3]);
                for (Session* s : {&deferred, &eager}) apply_pauli(s->state, in_data_frame(flip, s->data_frame));
                --flips_left;
            }
            const std::uint64_t seed = rng();
            std::mt19937_64 r1(seed), r2(seed);
            run_cycle(deferred, r1);
            run_cycle(eager, r2);
            update_frame(deferred.history, deferred.frame);
            update_frame(eager.history, eager.frame);
            apply_frame(eager);
        }
        worst_gap = std::max(worst_gap, bloch_dev(logical_readout(deferred).bloch, logical_readout(eager).bloch));
    }
    std::ostringstream d;
    d << "undisturbed cycles " << (silent ? "all 000000" : "reported flips") << ", fidelity 1 - "
      << sci(1 - worst_fid) << ", deferred vs per-cycle readout gap " << sci(worst_gap) << " over 20 runs";
    report(6, "QND and deferred correction", silent && worst_fid >= 1 - 1e-10 && worst_gap <= 1e-12, d.str());
}

void criterion_structure() {
    int eight = 0;
    for (int pattern = 0; pattern < 64; ++pattern) {
        std::array<int, 6> signs{};
        for (int i = 0; i < 6; ++i) signs[static_cast<std::size_t>(i)] = (pattern >> i) & 1 ? -1 : 1;
        eight += oracle::eigenspace_dimension(signs) == 8 ? 1 : 0;
    }
    const oracle::Dense n = oracle::nested_neighbor_dense(), e = oracle::external_neighbor_dense();
    const double n_dev = std::max(oracle::max_abs(n * n - oracle::Dense::Identity(64, 64)),
                                  oracle::max_abs(e * e - oracle::Dense::Identity(64, 64)));
    const oracle::Dense s = oracle::shift_dense();
    const double s_dev = oracle::max_abs(s * s * s * s - oracle::Dense::Identity(8, 8));
    const Mat8 r = rotation_dense();
    const double r_dev =
        (r * r - dense_on_particle(PauliWord::on(Particle::P0, "IXX"), Particle::P0)).cwiseAbs().maxCoeff();
    std::ostringstream d;
    d << eight << "/64 sign patterns give rank 8, |N^2 - I| " << sci(n_dev) << ", |S^4 - I| " << sci(s_dev)
      << ", |R^2 - XxXy| " << sci(r_dev);
    report(7, "structural invariants", eight == 64 && n_dev < 1e-15 && s_dev < 1e-15 && r_dev < 1e-15, d.str());
}

}  // namespace

int main() {
    criterion_table();
    criterion_gauge();
    criterion_campaign();
    criterion_identities();
    criterion_clifford_t();
    criterion_qnd_deferred();
    criterion_structure();
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
