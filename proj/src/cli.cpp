#include "kslab/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "kslab/bounds.hpp"
#include "kslab/errors.hpp"
#include "kslab/kscolor.hpp"
#include "kslab/measure.hpp"
#include "kslab/operators.hpp"
#include "kslab/ortho.hpp"
#include "kslab/rays.hpp"

#ifndef KSLAB_DATA_DIR
#define KSLAB_DATA_DIR "data"
#endif

namespace kslab::cli {

namespace {

using nlohmann::json;

constexpr const char *kCatalogNames = "cube13, peres24, three-cubes, kcbs5, ceg18";

struct SetOptions {
    std::string name;
    std::string file;
    std::string graph_file;
    double phase = 0.0;
};

void add_set_options(CLI::App *cmd, SetOptions &o, bool allow_graph) {
    cmd->add_option("--set", o.name, std::string("catalog set: ") + kCatalogNames);
    cmd->add_option("--file", o.file, "ray-set file (overrides --set)");
    cmd->add_option("--phase", o.phase, "free phase of three-cubes")->default_val(0.0);
    if (allow_graph)
        cmd->add_option("--graph", o.graph_file, "graph exchange file (instead of a ray set)");
}

RaySet catalog_set(const std::string &name, double phase, const std::string &file) {
    if (!file.empty())
        return load_rayset(file);
    if (name == "cube13")
        return cube13();
    if (name == "peres24")
        return peres24();
    if (name == "three-cubes")
        return three_cubes(CubePhase(phase));
    if (name == "kcbs5")
        return kcbs5();
    if (name == "ceg18")
        return load_rayset(std::string(KSLAB_DATA_DIR) + "/ceg18.json");
    throw ParseError("unknown set '" + name + "' (known: " + kCatalogNames + ")");
}

RaySet resolve_set(const SetOptions &o) {
    if (o.name.empty() && o.file.empty())
        throw ParseError("one of --set or --file is required");
    return catalog_set(o.name, o.phase, o.file);
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

OrthoGraph resolve_graph(const SetOptions &o) {
    if (!o.graph_file.empty() && o.file.empty())
        return parse_graph(read_file(o.graph_file));
    return ortho_graph(resolve_set(o));
}

std::string colour_string(const Coloring &c) {
    std::string s;
    for (auto col : c.assignment)
        s += col == Colour::Red ? 'R' : 'G';
    return s;
}

// ---- catalog -------------------------------------------------------------

int cmd_catalog_list(std::ostream &out) {
    out << "cube13       13 rays in R^3 (faces, edges, diagonals of a cube)\n"
        << "peres24      24 rays in R^4\n"
        << "three-cubes  33 rays in C^3, three interlocking cubes (--phase)\n"
        << "kcbs5        5 rays in R^3 forming the pentagon C5\n"
        << "ceg18        18 rays in R^4, read from " << KSLAB_DATA_DIR << "/ceg18.json\n";
    return kOk;
}

// ---- graph ---------------------------------------------------------------

int cmd_graph(const SetOptions &o, bool summary, std::ostream &out) {
    const auto g = resolve_graph(o);
    if (!summary) {
        out << graph_to_json(g) << "\n";
        return kOk;
    }
    const auto bases = complete_bases(g);
    const auto cliques = maximal_cliques(g);
    std::size_t largest = 0;
    for (const auto &c : cliques)
        largest = std::max(largest, c.size());
    out << "vertices: " << g.size() << "\n"
        << "edges: " << g.edge_count() << "\n"
        << "dimension: " << g.dimension() << "\n"
        << "complete bases: " << bases.bases.size() << "\n"
        << "maximal cliques: " << cliques.size() << " (largest " << largest << ")\n";
    return kOk;
}

// ---- color ---------------------------------------------------------------

int cmd_color(const SetOptions &o, bool as_json, std::ostream &out) {
    const auto g = resolve_graph(o);
    const auto bases = complete_bases(g);
    const auto verdict = ks_solve(g, bases);

    json doc;
    doc["vertices"] = g.size();
    doc["bases"] = bases.bases.size();
    if (const auto *c = std::get_if<Colorable>(&verdict)) {
        doc["verdict"] = "COLORABLE";
        doc["witness"] = colour_string(c->witness);
        doc["red"] = c->witness.red_count();
    } else {
        const auto &u = std::get<Uncolorable>(verdict);
        doc["verdict"] = "UNCOLORABLE";
        if (const auto *p = std::get_if<ParityCertificate>(&u.certificate)) {
            doc["certificate"] = {{"kind", "parity"},
                                  {"basis_count", p->basis_count},
                                  {"incidence_counts", p->incidence_counts}};
        } else {
            const auto &e = std::get<ExhaustionProof>(u.certificate);
            doc["certificate"] = {
                {"kind", "exhaustive"}, {"nodes", e.nodes}, {"conflicts", e.conflicts}};
        }
    }
    if (as_json) {
        out << doc.dump(2) << "\n";
        return kOk;
    }
    out << doc["verdict"].get<std::string>() << "\n";
    out << "vertices: " << g.size() << ", complete bases: " << bases.bases.size() << "\n";
    if (is_colorable(verdict)) {
        out << "witness: " << doc["witness"].get<std::string>() << " ("
            << doc["red"].get<std::size_t>() << " red)\n";
    } else {
        const auto &cert = doc["certificate"];
        if (cert["kind"] == "parity") {
            out << "certificate: parity, " << cert["basis_count"].get<std::size_t>()
                << " bases, every vertex in an even number of them\n";
        } else {
            out << "certificate: exhaustive search, " << cert["nodes"].get<std::uint64_t>()
                << " nodes, " << cert["conflicts"].get<std::uint64_t>() << " conflicts\n";
        }
    }
    return kOk;
}

// ---- bounds --------------------------------------------------------------

int cmd_bounds(const SetOptions &o, double eps, bool as_json, std::ostream &out) {
    const auto g = resolve_graph(o);
    const auto rep = bounds_report(g, eps);
    json doc;
    doc["alpha"] = rep.alpha;
    doc["theta"] = rep.theta.value;
    doc["alpha_star"] = rep.alpha_star;
    doc["duality_gap"] = rep.theta.gap;
    doc["theta_primal"] = rep.theta.primal;
    doc["theta_dual"] = rep.theta.dual;
    doc["theta_rank"] = rep.theta.rank;
    doc["independent_set"] = rep.independent_set;
    doc["packing_weights"] = rep.packing_weights;
    if (as_json) {
        out << doc.dump(2) << "\n";
        return kOk;
    }
    out << std::setprecision(10);
    out << "classical (independence number): " << rep.alpha << "\n"
        << "quantum (Lovasz theta):          " << rep.theta.value << "  (gap "
        << std::setprecision(3) << rep.theta.gap << ")\n"
        << std::setprecision(10) << "conspiratorial (fractional packing): " << rep.alpha_star
        << "\n";
    out << "independent set:";
    for (auto v : rep.independent_set)
        out << " " << v;
    out << "\n";
    return kOk;
}

// ---- spectrum ------------------------------------------------------------

int cmd_spectrum(const SetOptions &o, bool as_json, std::ostream &out) {
    const auto rs = resolve_set(o);
    const auto sigma = projector_sum(rs);
    const auto values = eigenvalues(sigma);
    const double top = eigen_max(sigma);
    const auto povm = equal_weight_povm_check(rs);
    json doc;
    doc["dimension"] = rs.dimension();
    doc["rays"] = rs.size();
    doc["trace"] = sigma.trace();
    doc["eigenvalues"] = values;
    doc["max_eigenvalue"] = top;
    doc["equal_weight_povm"] = povm.proportional;
    doc["povm_constant"] = povm.constant;
    doc["povm_deviation"] = povm.deviation;
    if (as_json) {
        out << doc.dump(2) << "\n";
        return kOk;
    }
    out << std::setprecision(12);
    out << "eigenvalues:";
    for (double v : values)
        out << " " << v;
    out << "\nmax eigenvalue: " << top << "\ntrace: " << sigma.trace() << "\n";
    if (povm.proportional)
        out << "equal-weight POVM: yes, sum = " << povm.constant << " * I\n";
    else
        out << "equal-weight POVM: no (max deviation " << povm.deviation << ")\n";
    return kOk;
}

// ---- platter -------------------------------------------------------------

struct PlatterOptions {
    std::string strategy = "classical";
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 1;
    std::string stones = "10100";
    std::vector<double> state{0.0, 0.0, 1.0};
    bool as_json = false;
};

int cmd_platter(const PlatterOptions &o, std::ostream &out) {
    PlatterStrategy strategy;
    if (o.strategy == "classical") {
        if (o.stones.size() != 5 || o.stones.find_first_not_of("01") != std::string::npos)
            throw ParseError("--stones must be five characters of 0/1");
        PentagonAssignment a{};
        for (int k = 0; k < 5; ++k)
            a[k] = o.stones[k] == '1';
        strategy = ClassicalStrategy{a};
    } else if (o.strategy == "conspiratorial") {
        strategy = ConspiratorialStrategy{};
    } else if (o.strategy == "quantum") {
        std::vector<Complex> v;
        if (o.state.size() == 3) {
            for (double x : o.state)
                v.emplace_back(x, 0.0);
        } else if (o.state.size() == 6) {
            for (std::size_t k = 0; k < 6; k += 2)
                v.emplace_back(o.state[k], o.state[k + 1]);
        } else {
            throw ParseError("--state takes 3 real or 6 (re, im) numbers");
        }
        strategy = QuantumStrategy{canonicalize(v, Field::Complex)};
    } else {
        throw ParseError("unknown strategy '" + o.strategy + "'");
    }
    const auto res = platter_simulate(strategy, o.trials, o.seed);
    json doc;
    doc["strategy"] = o.strategy;
    doc["estimate"] = res.estimate;
    doc["stderr"] = res.std_error;
    doc["trials"] = res.trials;
    doc["seed"] = res.seed;
    doc["frequencies"] = res.frequencies;
    if (o.as_json) {
        out << doc.dump(2) << "\n";
        return kOk;
    }
    out << std::setprecision(8);
    out << "strategy: " << o.strategy << "\n"
        << "estimate: " << res.estimate << " +- " << res.std_error << "\n"
        << "trials: " << res.trials << "  seed: " << res.seed << "\n";
    return kOk;
}

// ---- measure -------------------------------------------------------------

struct MeasureOptions {
    std::string field = "real";
    std::size_t dim = 3;
    std::uint64_t mc = 0;
    std::uint64_t seed = 1;
    bool as_json = false;
    bool csv = false;
    std::size_t from = 2;
    std::size_t to = 12;
};

double closed_form(Field f, std::size_t d) {
    return f == Field::Real ? colored_fraction_real(d) : colored_fraction_complex(d);
}

json estimate_json(const MCEstimate &e) {
    return {{"value", e.value}, {"stderr", e.std_error}, {"samples", e.samples}, {"seed", e.seed}};
}

int cmd_measure_fraction(const MeasureOptions &o, std::ostream &out) {
    const Field f = field_from_string(o.field);
    if (o.csv) {
        out << (o.mc ? "dim,closed_form,mc,stderr,samples,seed\n" : "dim,closed_form\n");
        out << std::setprecision(12);
        for (std::size_t d = o.from; d <= o.to; ++d) {
            out << d << "," << closed_form(f, d);
            if (o.mc) {
                const auto e = mc_colored_fraction(f, d, o.mc, o.seed);
                out << "," << e.value << "," << e.std_error << "," << e.samples << "," << e.seed;
            }
            out << "\n";
        }
        return kOk;
    }
    const double exact = closed_form(f, o.dim);
    json doc;
    doc["field"] = o.field;
    doc["dim"] = o.dim;
    doc["closed_form"] = exact;
    std::optional<MCEstimate> est;
    if (o.mc) {
        est = mc_colored_fraction(f, o.dim, o.mc, o.seed);
        doc["mc"] = estimate_json(*est);
    }
    if (o.as_json) {
        out << doc.dump(2) << "\n";
        return kOk;
    }
    out << std::setprecision(10);
    out << "closed form: " << exact << "\n";
    if (est)
        out << "monte carlo: " << est->value << " +- " << est->std_error
            << "  (samples " << est->samples << ", seed " << est->seed << ")\n";
    return kOk;
}

int cmd_measure_bases(const MeasureOptions &o, std::ostream &out) {
    const std::uint64_t n = o.mc ? o.mc : 100000;
    if (o.csv) {
        out << "dim,fraction,stderr,samples,seed\n" << std::setprecision(12);
        for (std::size_t d = o.from; d <= o.to; ++d) {
            const auto e = basis_colored_fraction_mc(d, n, o.seed);
            out << d << "," << e.value << "," << e.std_error << "," << e.samples << "," << e.seed
                << "\n";
        }
        return kOk;
    }
    const auto e = basis_colored_fraction_mc(o.dim, n, o.seed);
    if (o.as_json) {
        json doc = estimate_json(e);
        doc["dim"] = o.dim;
        out << doc.dump(2) << "\n";
        return kOk;
    }
    out << std::setprecision(10) << "coloured bases: " << e.value << " +- " << e.std_error
        << "  (samples " << e.samples << ", seed " << e.seed << ")\n";
    return kOk;
}

int cmd_measure_validity(const MeasureOptions &o, std::ostream &out) {
    const std::uint64_t n = o.mc ? o.mc : 100000;
    const auto c = region_validity_mc(field_from_string(o.field), o.dim, n, o.seed);
    json doc{{"field", o.field}, {"dim", o.dim},   {"red_pairs", c.red_pairs},
             {"green_bases", c.green_bases}, {"samples", c.samples}, {"seed", o.seed}};
    if (o.as_json) {
        out << doc.dump(2) << "\n";
        return kOk;
    }
    out << "orthogonal red pairs: " << c.red_pairs << "\n"
        << "all-green bases: " << c.green_bases << "\n"
        << "samples: " << c.samples << "  seed: " << o.seed << "\n";
    return kOk;
}

int cmd_measure_separable(const MeasureOptions &o, std::ostream &out) {
    const std::uint64_t n = o.mc ? o.mc : 100000;
    const auto r = separable_validity_mc(n, o.seed);
    json doc{{"violations", r.violations}, {"pairs", r.pairs}, {"samples", r.samples},
             {"seed", r.seed}};
    if (o.as_json) {
        out << doc.dump(2) << "\n";
        return kOk;
    }
    out << "same-quadrant orthogonal pairs: " << r.violations << " of " << r.pairs << "\n"
        << "samples: " << r.samples << "  seed: " << r.seed << "\n";
    return kOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Kochen-Specker colouring toolkit"};
    app.require_subcommand(1);

    auto *catalog = app.add_subcommand("catalog", "list or emit the built-in ray sets");
    catalog->require_subcommand(1);
    auto *catalog_list = catalog->add_subcommand("list", "list catalog sets");
    auto *catalog_emit = catalog->add_subcommand("emit", "write a set in the ray-set file format");
    std::string emit_name;
    std::string emit_file;
    double emit_phase = 0.0;
    catalog_emit->add_option("name", emit_name, kCatalogNames)->required();
    catalog_emit->add_option("--phase", emit_phase, "free phase of three-cubes");
    catalog_emit->add_option("--file", emit_file, "ray-set file to re-emit canonicalized");

    SetOptions graph_opts;
    bool graph_summary = false;
    auto *graph = app.add_subcommand("graph", "orthogonality graph in the graph exchange format");
    add_set_options(graph, graph_opts, false);
    graph->add_flag("--summary", graph_summary, "print counts instead of the graph");

    SetOptions color_opts;
    bool color_json = false;
    auto *color = app.add_subcommand("color", "decide KS colourability");
    add_set_options(color, color_opts, true);
    color->add_flag("--json", color_json, "machine-readable output");

    SetOptions bounds_opts;
    bool bounds_json = false;
    double bounds_eps = 1e-6;
    auto *bounds = app.add_subcommand("bounds", "classical, quantum and conspiratorial bounds");
    add_set_options(bounds, bounds_opts, true);
    bounds->add_flag("--json", bounds_json, "machine-readable output");
    bounds->add_option("--eps", bounds_eps, "theta duality-gap target")->default_val(1e-6);

    SetOptions spectrum_opts;
    bool spectrum_json = false;
    auto *spectrum = app.add_subcommand("spectrum", "spectrum of the projector sum");
    add_set_options(spectrum, spectrum_opts, false);
    spectrum->add_flag("--json", spectrum_json, "machine-readable output");

    PlatterOptions platter_opts;
    auto *platter = app.add_subcommand("platter", "simulate the pentagon platter");
    platter->add_option("--strategy", platter_opts.strategy, "classical|conspiratorial|quantum")
        ->check(CLI::IsMember({"classical", "conspiratorial", "quantum"}));
    platter->add_option("--trials", platter_opts.trials, "number of trials")->default_val(1000000);
    platter->add_option("--seed", platter_opts.seed, "RNG seed")->default_val(1);
    platter->add_option("--stones", platter_opts.stones, "classical stones, e.g. 10100")
        ->default_val("10100");
    platter->add_option("--state", platter_opts.state,
                        "quantum state: 3 real or 6 re,im numbers")
        ->delimiter(',');
    platter->add_flag("--json", platter_opts.as_json, "machine-readable output");

    MeasureOptions mopts;
    auto *measure = app.add_subcommand("measure", "cap-and-belt colouring measures");
    measure->require_subcommand(1);
    measure->footer("CSV columns: fraction -> dim,closed_form[,mc,stderr,samples,seed]; "
                    "bases -> dim,fraction,stderr,samples,seed");
    auto add_common = [&](CLI::App *c, bool field, bool dim) {
        if (field)
            c->add_option("--field", mopts.field, "real|complex")
                ->check(CLI::IsMember({"real", "complex"}));
        if (dim)
            c->add_option("--dim", mopts.dim, "dimension")->check(CLI::Range(2, 100000));
        c->add_option("--mc", mopts.mc, "Monte Carlo samples");
        c->add_option("--seed", mopts.seed, "RNG seed")->default_val(1);
        c->add_flag("--json", mopts.as_json, "machine-readable output");
    };
    auto *m_fraction = measure->add_subcommand("fraction", "coloured fraction of rays");
    add_common(m_fraction, true, true);
    m_fraction->add_flag("--csv", mopts.csv, "scan dimensions --from..--to as CSV");
    m_fraction->add_option("--from", mopts.from, "first scanned dimension")->default_val(2);
    m_fraction->add_option("--to", mopts.to, "last scanned dimension")->default_val(12);
    auto *m_bases = measure->add_subcommand("bases", "fraction of fully coloured real bases");
    add_common(m_bases, false, true);
    m_bases->add_flag("--csv", mopts.csv, "scan dimensions --from..--to as CSV");
    m_bases->add_option("--from", mopts.from, "first scanned dimension")->default_val(3);
    m_bases->add_option("--to", mopts.to, "last scanned dimension")->default_val(10);
    auto *m_validity = measure->add_subcommand("validity", "check colouring rules on random bases");
    add_common(m_validity, true, true);
    auto *m_separable = measure->add_subcommand("separable", "two-qubit separable quadrants");
    add_common(m_separable, false, false);

    std::vector<const char *> argv{"kslab"};
    for (const auto &a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (catalog_list->parsed())
            return cmd_catalog_list(out);
        if (catalog_emit->parsed()) {
            out << rayset_to_json(catalog_set(emit_name, emit_phase, emit_file)) << "\n";
            return kOk;
        }
        if (graph->parsed())
            return cmd_graph(graph_opts, graph_summary, out);
        if (color->parsed())
            return cmd_color(color_opts, color_json, out);
        if (bounds->parsed())
            return cmd_bounds(bounds_opts, bounds_eps, bounds_json, out);
        if (spectrum->parsed())
            return cmd_spectrum(spectrum_opts, spectrum_json, out);
        if (platter->parsed())
            return cmd_platter(platter_opts, out);
        if (m_fraction->parsed())
            return cmd_measure_fraction(mopts, out);
        if (m_bases->parsed())
            return cmd_measure_bases(mopts, out);
        if (m_validity->parsed())
            return cmd_measure_validity(mopts, out);
        if (m_separable->parsed())
            return cmd_measure_separable(mopts, out);
    } catch (const NumericalFailure &e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const NonConvergence &e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    err << app.help();
    return kInvalidInput;
}

} // namespace kslab::cli
