// Batch front end for the wavechannel library.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wavechannel/wavechannel.hpp"

namespace wc = wavechannel;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitError = 3;

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw wc::InvalidInput("cannot write '" + path + "'");
    out << text;
}

template <class F>
void write_with(const std::string& path, F&& f) {
    std::ostringstream os;
    f(os);
    write_text(path, os.str());
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

wc::RadialProfile read_profile(const std::string& path, const wc::DimensionContext& ctx, wc::Direction dir) {
    return wc::RadialProfile(ctx, wc::parse_line_csv(wc::slurp_file(path)), dir);
}

struct Common {
    int dim = 3;
    std::string in, out, csv;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial radiation fields, channel-of-energy checks and a spectral wave oracle"};
    app.set_config("--config", "", "INI/TOML file with option values");
    app.require_subcommand(1, 1);
    Common c;

    // ops ---------------------------------------------------------------------------------------
    auto* ops = app.add_subcommand("ops", "one-dimensional operators on sampled profiles (CSV s,value)");
    std::string op;
    int order = 1, kappa = 0;
    std::string side = "causal", at;
    double extension = 0, hi = 0;
    ops->add_option("op", op, "operator")
        ->required()
        ->check(CLI::IsMember({"hilbert", "half-integral", "derivative", "laplace", "half-line-extend",
                               "chebyshev-hilbert", "w-polynomial", "laplace-norm"}));
    ops->add_option("--in", c.in, "input profile CSV");
    ops->add_option("--out", c.out, "output file (default stdout)");
    ops->add_option("--order", order, "derivative order")->check(CLI::Range(1, 12));
    ops->add_option("--side", side, "half-integral side")->check(CLI::IsMember({"causal", "anticausal"}));
    ops->add_option("--extension", extension, "half-integral output extension")->check(CLI::NonNegativeNumber);
    ops->add_option("--at", at, "comma-separated evaluation points for laplace");
    ops->add_option("--hi", hi, "half-line-extend: output window end (default 2x input end)");
    ops->add_option("--kappa", kappa, "chebyshev-hilbert index")->check(CLI::NonNegativeNumber);
    ops->add_option("--dim", c.dim, "dimension for w-polynomial")->envname("WAVECHANNEL_DIM");

    // oracle --------------------------------------------------------------------------------------
    auto* oracle = app.add_subcommand("oracle", "spectral evolution of radial data (CSV r,u0,u1)");
    double time = 0, exterior = -1;
    std::string direction = "minus", method = "ladder";
    bool want_profile = false;
    oracle->add_option("--dim", c.dim, "dimension d >= 2")->required()->envname("WAVECHANNEL_DIM");
    oracle->add_option("--data", c.in, "field CSV")->required();
    oracle->add_option("--time", time, "evolve to time t");
    oracle->add_option("--exterior", exterior, "print the exterior energy limit at radius R")
        ->check(CLI::NonNegativeNumber);
    oracle->add_flag("--profile", want_profile, "write the radiation profile instead of the evolved field");
    oracle->add_option("--direction", direction, "plus|minus")->check(CLI::IsMember({"plus", "minus"}));
    oracle->add_option("--method", method, "ladder|asymptotic")
        ->check(CLI::IsMember({"ladder", "asymptotic"}))
        ->envname("WAVECHANNEL_METHOD");
    oracle->add_option("--out", c.out, "output file (default stdout)");

    // transform -----------------------------------------------------------------------------------
    auto* transform = app.add_subcommand("transform", "explicit radiation-field maps");
    std::string tdir;
    bool has_time = false;
    transform->add_option("--dim", c.dim, "dimension d >= 2")->required()->envname("WAVECHANNEL_DIM");
    transform->add_option("--direction", tdir, "inverse|forward|profile-map")
        ->required()
        ->check(CLI::IsMember({"inverse", "forward", "profile-map"}));
    transform->add_option("--in", c.in, "G_minus CSV (inverse, profile-map) or field CSV (forward)")->required();
    transform->add_option("--out", c.out, "output file (default stdout)");
    auto* time_opt = transform->add_option("--time", time, "inverse: solution at time t");

    // verify --------------------------------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "seeded trials of a named estimate");
    std::string check;
    double radius = 1, tolerance = 0;
    int seeds = 5;
    std::uint64_t seed_start = 1;
    std::string vmethod = "asymptotic";
    verify->add_option("--check", check, "estimate name")->required()->check(CLI::IsMember(wc::estimate_names()));
    verify->add_option("--dim", c.dim, "dimension")->required()->envname("WAVECHANNEL_DIM");
    verify->add_option("--radius", radius, "R (also the trial scale)")
        ->check(CLI::PositiveNumber)
        ->envname("WAVECHANNEL_RADIUS");
    verify->add_option("--seeds", seeds, "number of seeds")->check(CLI::Range(1, 100000))->envname("WAVECHANNEL_SEEDS");
    verify->add_option("--seed-start", seed_start, "first seed")->envname("WAVECHANNEL_SEED_START");
    verify->add_option("--method", vmethod, "exterior limit route")
        ->check(CLI::IsMember({"ladder", "asymptotic"}))
        ->envname("WAVECHANNEL_METHOD");
    verify->add_option("--tolerance", tolerance, "override the check tolerance")
        ->check(CLI::PositiveNumber)
        ->envname("WAVECHANNEL_TOLERANCE");
    verify->add_option("--out", c.out, "report JSON")->envname("WAVECHANNEL_OUT");
    verify->add_option("--csv", c.csv, "report CSV");

    // report --------------------------------------------------------------------------------------
    auto* report = app.add_subcommand("report", "merge report documents");
    std::vector<std::string> inputs;
    report->add_option("--in", inputs, "report JSON files")->required();
    report->add_option("--out", c.out, "merged JSON");
    report->add_option("--csv", c.csv, "CSV of (check, dim, R, seed, ratio, pass)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error usage: %s\n", one_line(e.what()).c_str());
        return kExitParse;
    }
    has_time = time_opt->count() > 0;

    try {
        if (*ops) {
            if (op == "chebyshev-hilbert") {
                write_text(c.out, dump(wc::to_json(wc::chebyshev_hilbert(kappa))));
            } else if (op == "w-polynomial") {
                write_text(c.out, dump(wc::to_json(wc::w_polynomial(wc::DimensionContext(c.dim)))));
            } else if (op == "laplace-norm") {
                const auto n = wc::laplace_norm_estimate();
                nlohmann::ordered_json j;
                j["norm"] = n.value;
                j["sqrt_pi"] = std::sqrt(std::numbers::pi);
                write_text(c.out, dump(j));
            } else {
                if (c.in.empty()) throw wc::InvalidInput("--in is required for '" + op + "'");
                const wc::SampledLine f = wc::parse_line_csv(wc::slurp_file(c.in));
                if (op == "hilbert") {
                    write_with(c.out, [&](std::ostream& os) { wc::write_line_csv(os, wc::hilbert(f)); });
                } else if (op == "half-integral") {
                    wc::HalfIntegralOptions ho;
                    ho.extension = extension;
                    const auto s = side == "causal" ? wc::Side::causal : wc::Side::anticausal;
                    write_with(c.out, [&](std::ostream& os) { wc::write_line_csv(os, wc::half_integral(f, s, ho)); });
                } else if (op == "derivative") {
                    write_with(c.out, [&](std::ostream& os) { wc::write_line_csv(os, wc::derivative(f, order)); });
                } else if (op == "laplace") {
                    const wc::LaplaceTransform L(f);
                    std::vector<double> pts;
                    std::stringstream ss(at);
                    for (std::string item; std::getline(ss, item, ',');) pts.push_back(std::stod(item));
                    if (pts.empty()) throw wc::InvalidInput("--at needs at least one point");
                    write_with(c.out, [&](std::ostream& os) {
                        wc::write_csv_row(os, {"s", "value"});
                        for (double s : pts) wc::write_csv_row(os, {wc::format_number(s), wc::format_number(L(s))});
                    });
                } else {  // half-line-extend
                    const auto sol = wc::half_line_extend(f);
                    const double top = hi > 0 ? hi : 2 * f.hi();
                    write_with(c.out, [&](std::ostream& os) { wc::write_line_csv(os, sol.to_line(0, top, f.h())); });
                    std::fprintf(stderr, "iterations %d residual %.3e norm_T %.6f\n", sol.iterations, sol.residual,
                                 sol.norm_T);
                }
            }
            return 0;
        }

        if (*oracle) {
            const wc::DimensionContext ctx(c.dim);
            const wc::RadialField f = wc::parse_field_csv(wc::slurp_file(c.in), ctx);
            const wc::Direction dir = wc::parse_direction(direction);
            const auto lm = method == "ladder" ? wc::LimitMethod::ladder : wc::LimitMethod::asymptotic;
            if (exterior >= 0) {
                wc::ExteriorOptions eo;
                eo.method = lm;
                eo.levels = wc::default_levels(c.dim);
                const double E = wc::exterior_energy_limit(f, exterior, dir, eo);
                write_text(c.out, nlohmann::json(E).dump() + "\n");
            } else if (want_profile) {
                wc::ExtractOptions xo;
                xo.method = lm;
                const auto G = wc::extract_profile(f, dir, xo);
                write_with(c.out, [&](std::ostream& os) { wc::write_line_csv(os, G.line()); });
            } else {
                const auto ft = wc::evolve(f, time);
                write_with(c.out, [&](std::ostream& os) { wc::write_field_csv(os, ft); });
            }
            return 0;
        }

        if (*transform) {
            const wc::DimensionContext ctx(c.dim);
            if (tdir == "forward") {
                const wc::RadialField f = wc::parse_field_csv(wc::slurp_file(c.in), ctx);
                const auto G = wc::extract_profile(f, wc::Direction::minus);
                write_with(c.out, [&](std::ostream& os) { wc::write_line_csv(os, G.line()); });
            } else {
                const auto G = read_profile(c.in, ctx, wc::Direction::minus);
                if (tdir == "inverse") {
                    const auto f = has_time ? wc::solution_from_profile(G, time) : wc::inverse_map(G);
                    write_with(c.out, [&](std::ostream& os) { wc::write_field_csv(os, f); });
                } else {
                    const auto Gp = wc::profile_map(G);
                    write_with(c.out, [&](std::ostream& os) { wc::write_line_csv(os, Gp.line()); });
                }
            }
            return 0;
        }

        if (*verify) {
            const wc::DimensionContext ctx(c.dim);
            wc::VerifyOptions vo;
            vo.method = vmethod == "ladder" ? wc::LimitMethod::ladder : wc::LimitMethod::asymptotic;
            vo.tolerance = tolerance;
            std::vector<std::uint64_t> list;
            for (int i = 0; i < seeds; ++i) list.push_back(seed_start + std::uint64_t(i));
            const auto reps = wc::verify_suite(check, ctx, radius, list, vo);
            bool ok = true;
            for (const auto& r : reps) {
                std::printf("%s d=%d R=%g seed=%llu ratio=%.9g constant=%g %s\n", r.check.c_str(), r.dim, r.R,
                            static_cast<unsigned long long>(r.seed), r.ratio, r.paper_constant,
                            r.pass ? "PASS" : "FAIL");
                ok = ok && r.pass;
            }
            if (!c.out.empty()) write_text(c.out, dump(wc::report_document(reps)));
            if (!c.csv.empty()) write_with(c.csv, [&](std::ostream& os) { wc::write_report_csv(os, reps); });
            return ok ? 0 : kExitFail;
        }

        if (*report) {
            std::vector<wc::VerificationReport> all;
            for (const auto& path : inputs) {
                nlohmann::json doc;
                try {
                    doc = nlohmann::json::parse(wc::slurp_file(path));
                } catch (const nlohmann::json::exception& e) {
                    throw wc::ParseError("'" + path + "': " + e.what());
                }
                try {
                    for (auto& r : wc::reports_from_document(doc)) all.push_back(std::move(r));
                } catch (const nlohmann::json::exception& e) {
                    throw wc::ParseError("'" + path + "': " + e.what());
                }
            }
            const auto doc = wc::report_document(all);
            write_text(c.out, dump(doc));
            if (!c.csv.empty()) write_with(c.csv, [&](std::ostream& os) { wc::write_report_csv(os, all); });
            return 0;
        }
    } catch (const wc::ParseError& e) {
        std::fprintf(stderr, "error %s: %s\n", e.code().c_str(), one_line(e.what()).c_str());
        return kExitParse;
    } catch (const wc::Error& e) {
        std::fprintf(stderr, "error %s: %s\n", e.code().c_str(), one_line(e.what()).c_str());
        return kExitError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error internal: %s\n", one_line(e.what()).c_str());
        return kExitError;
    }
    return 0;
}
