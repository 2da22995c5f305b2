// entdim command-line tool: witness reports, collective-variance bounds,
// dimensionality-vector certification, figure data and example state files.
//
// Exit codes: 0 success, 2 state-file parse error, 3 invalid parameters,
// 4 undecided (size caps exceeded).

#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include <entdim/entdim.hpp>

namespace {

using nlohmann::json;

constexpr int kExitParse = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitUndecided = 4;
constexpr long kDenseDimCap = 128;

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json report_skeleton(const std::string& command, std::uint64_t seed) {
    json doc;
    doc["schema_version"] = 1;
    doc["tool"] = "entdim";
    doc["tool_version"] = entdim::version;
    doc["command"] = command;
    doc["seed"] = seed;
    doc["timestamp"] = iso_timestamp();
    return doc;
}

void emit(const json& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << doc.dump(2) << "\n";
    }
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QFIM_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw std::invalid_argument("QFIM_SEED must be an unsigned integer");
        }
    }
    return 20240;
}

json input_descriptor(const std::string& path, const entdim::AnyState& state) {
    json in;
    in["file"] = path;
    in["dims"] = entdim::dims_of(state);
    in["kind"] = std::holds_alternative<entdim::PureState>(state) ? "pure" : "mixed";
    return in;
}

// ---------------------------------------------------------------- witness --

int cmd_witness(const std::string& state_path, const std::string& basis_name, int max_r,
                const std::string& out_path, std::uint64_t seed) {
    using namespace entdim;
    if (basis_name != "gellmann")
        throw std::invalid_argument("unsupported basis: " + basis_name);

    AnyState any = read_state_file(state_path);
    DensityMatrix rho = as_density(any);
    if (rho.num_parties() != 2 || rho.dims[0] != rho.dims[1])
        throw std::invalid_argument("witness requires a bipartite d x d state");
    const int d = rho.dims[0];
    int rmax = (max_r <= 0) ? d : std::min(max_r, d);

    BasisSet ga = gellmann_basis(d), gb = gellmann_basis(d);
    WitnessReport plain = obs1_report(rho, ga, gb);
    auto [ga_opt, gb_opt] = optimize_local_bases(rho, ga, gb);
    WitnessReport rep = obs1_report(rho, ga_opt, gb_opt);

    json doc = report_skeleton("witness", seed);
    doc["input"] = input_descriptor(state_path, any);
    doc["parameters"] = {{"basis", basis_name}, {"max_r", rmax}};

    json per_r = json::array();
    int certified = 1;
    for (int r = 1; r <= rmax; ++r) {
        const auto& v = rep.per_r[r - 1];
        if (v.any_violated()) certified = r + 1;
        per_r.push_back({{"r", r},
                         {"bound_5a", v.bound_5a},
                         {"bound_5c", v.bound_5c},
                         {"bound_7", v.bound_7},
                         {"h", v.h},
                         {"violated_5a", v.violated_5a},
                         {"violated_5b", v.violated_5b},
                         {"violated_5c", v.violated_5c},
                         {"violated_7", v.violated_7}});
    }
    json results;
    results["d"] = d;
    results["tr_f_a"] = rep.tr_fa;
    results["tr_f_b"] = rep.tr_fb;
    results["trace_norm_x"] = rep.tr_norm_x;
    results["h"] = rep.per_r[std::min(certified, d) - 1].h;
    results["obs2_sum"] = plain.obs2_sum;
    results["obs2_sum_optimized"] = rep.obs2_sum;
    results["per_r"] = per_r;
    results["certified_min_schmidt_number"] = certified;
    doc["results"] = results;
    emit(doc, out_path);
    return 0;
}

// ------------------------------------------------------------------ bound --

int cmd_bound(double j, const std::string& components, const std::string& sign_str, int r,
              int restarts, std::uint64_t seed, bool aligned, const std::string& out_path) {
    using namespace entdim;
    SpinTriple spin;
    spin.j = j;
    spin.components = components;
    if (sign_str == "+")
        spin.sign = 1;
    else if (sign_str == "-")
        spin.sign = -1;
    else
        throw std::invalid_argument("--sign must be + or -");

    const int d = spin.local_dim();
    if (r <= 0) r = d;

    OptimConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.aligned_only = aligned;

    BoundResult res = bound_Br(spin.collective_ops(), r, d, cfg);

    json doc = report_skeleton("bound", seed);
    doc["input"] = nullptr;
    doc["parameters"] = {{"j", j},          {"components", components}, {"sign", sign_str},
                         {"r", r},          {"restarts", restarts},     {"aligned", aligned},
                         {"d", d}};

    bool aligned_form_ok = (components == "xy") || spin.sign == -1;
    json rows = json::array();
    for (int level = 1; level <= r; ++level) {
        json row;
        row["r"] = level;
        row["variance_sum"] = res.per_level[level - 1];
        row["qfi_bound"] = 4.0 * res.per_level[level - 1];
        if (aligned_form_ok)
            row["aligned_closed_form"] = spin_bound_aligned(j, level, components, -1);
        if (level == 2 && components == "xy")
            row["analytic_r2"] = spin_bound_r2_analytic(j);
        if (level == d && components == "xy") row["global_bound"] = global_spin_bound(j);
        rows.push_back(row);
    }
    json results;
    results["rows"] = rows;
    results["converged"] = res.converged;
    doc["results"] = results;
    emit(doc, out_path);
    return 0;
}

// ---------------------------------------------------------------- certify --

std::map<int, std::vector<int>> parse_vector_spec(const std::string& spec) {
    std::map<int, std::vector<int>> classes;
    int cls = 1;
    size_t pos = 0;
    while (pos <= spec.size()) {
        size_t next = spec.find(';', pos);
        std::string group = spec.substr(pos, next == std::string::npos ? next : next - pos);
        std::vector<int> values;
        size_t p2 = 0;
        while (p2 <= group.size() && !group.empty()) {
            size_t comma = group.find(',', p2);
            std::string tok = group.substr(p2, comma == std::string::npos ? comma : comma - p2);
            if (!tok.empty()) {
                try {
                    values.push_back(std::stoi(tok));
                } catch (...) {
                    throw std::invalid_argument("--vector: not an integer: " + tok);
                }
            }
            if (comma == std::string::npos) break;
            p2 = comma + 1;
        }
        if (!values.empty()) classes[cls] = values;
        ++cls;
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (classes.empty()) throw std::invalid_argument("--vector: empty specification");
    return classes;
}

json class_grouped(const entdim::DimVectorCandidate& cand) {
    json out = json::array();
    for (const auto& [cls, values] : cand.class_values) {
        // run-length encode the descending values, like the 4_20 2_14 1_1 notation
        json runs = json::array();
        size_t i = 0;
        while (i < values.size()) {
            size_t k = i;
            while (k < values.size() && values[k] == values[i]) ++k;
            runs.push_back({{"value", values[i]}, {"count", k - i}});
            i = k;
        }
        out.push_back({{"party_size", cls}, {"values", values}, {"runs", runs}});
    }
    return out;
}

int cmd_certify(const std::string& state_path, const std::string& vector_spec, bool pure_exact,
                const std::string& out_path, std::uint64_t seed) {
    using namespace entdim;
    AnyState any = read_state_file(state_path);
    const auto& dims = dims_of(any);
    if (dims.size() < 2) throw std::invalid_argument("certify requires a multipartite state");
    if (total_dim(dims) > kDenseDimCap)
        throw CapExceeded("state dimension " + std::to_string(total_dim(dims)) +
                          " exceeds the dense cap " + std::to_string(kDenseDimCap));

    json doc = report_skeleton("certify", seed);
    doc["input"] = input_descriptor(state_path, any);
    json results;
    results["n"] = dims.size();

    if (pure_exact) {
        if (!std::holds_alternative<PureState>(any))
            throw std::invalid_argument("--pure-exact requires a pure state file");
        const auto& psi = std::get<PureState>(any);
        DimVectorCandidate cand = pure_state_dim_vector(psi);
        StructureResult structure = structure_from_vector(cand);
        results["vector"] = class_grouped(cand);
        json parts = json::array();
        for (const auto& party : structure.partition) {
            std::string label;
            for (int p : party) label += std::to_string(p + 1);
            parts.push_back(label);
        }
        results["partition"] = parts;
        results["k_separability"] = structure.k_separability;
        results["depth"] = structure.depth;
        results["verdict"] = "feasible";
        doc["parameters"] = {{"mode", "pure-exact"}};
    } else {
        auto classes = parse_vector_spec(vector_spec);
        DimVectorCandidate cand =
            DimVectorCandidate::from_class_values(static_cast<int>(dims.size()), classes);
        std::vector<CutValue> hs = std::holds_alternative<PureState>(any)
                                       ? h_vector(std::get<PureState>(any))
                                       : h_vector(std::get<DensityMatrix>(any));
        CheckResult check = check_dim_vector(hs, cand);
        json cuts = json::array();
        for (const auto& cv : hs)
            cuts.push_back({{"label", cv.cut.label()},
                            {"party_size", cv.cut.size_class()},
                            {"h", cv.h}});
        results["cuts"] = cuts;
        results["candidate"] = class_grouped(cand);
        results["verdict"] = check.verdict == Feasibility::feasible     ? "feasible"
                             : check.verdict == Feasibility::infeasible ? "infeasible"
                                                                        : "undecided";
        results["violated_cuts"] = check.violated_cuts;
        results["note"] = check.note;
        doc["parameters"] = {{"mode", "vector"}, {"vector", vector_spec}};
    }
    doc["results"] = results;
    emit(doc, out_path);
    return 0;
}

// ---------------------------------------------------------------- figure1 --

int cmd_figure1(const std::string& d_list) {
    using namespace entdim;
    std::vector<int> ds;
    size_t pos = 0;
    while (pos <= d_list.size()) {
        size_t comma = d_list.find(',', pos);
        std::string tok = d_list.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!tok.empty()) ds.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (ds.empty()) throw std::invalid_argument("--d-list: no dimensions given");

    std::cout << "d,r,bound,mes_sum\n";
    char buf[128];
    for (int d : ds) {
        if (d < 2) throw std::invalid_argument("--d-list: dimensions must be >= 2");
        BasisSet ga = gellmann_basis(d), gb = gellmann_basis(d);
        for (int r = 1; r <= d; ++r) {
            DensityMatrix rho = DensityMatrix::from_pure(mes_state(d, r));
            auto [ga_opt, gb_opt] = optimize_local_bases(rho, ga, gb);
            QfimBlocks blocks = qfim_blocks(rho, ga_opt, gb_opt);
            double mes_sum = blocks.f_a.trace() + blocks.f_b.trace() + 2.0 * blocks.x.trace();
            double bound = obs2_bound(d, r);
            std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g\n", d, r, bound, mes_sum);
            std::cout << buf;
        }
    }
    return 0;
}

// ---------------------------------------------------------------- example --

int cmd_example(const std::string& name, int d, int r, int n, const std::vector<double>& p,
                const std::vector<int>& dims, const std::string& out_path) {
    using namespace entdim;
    auto write_pure = [&](const PureState& psi) {
        if (out_path.empty())
            std::cout << to_json(psi).dump(2) << "\n";
        else
            write_state_file(out_path, psi);
    };
    auto write_mixed = [&](const DensityMatrix& rho) {
        if (out_path.empty())
            std::cout << to_json(rho).dump(2) << "\n";
        else
            write_state_file(out_path, rho);
    };

    if (name == "bell") {
        write_pure(bell_state());
    } else if (name == "mes") {
        write_pure(mes_state(d, r));
    } else if (name == "ghz") {
        write_pure(ghz_state(n, d));
    } else if (name == "rho_s") {
        if (p.size() != 3) throw std::invalid_argument("rho_s needs --p p1,p2,p3");
        write_mixed(rho_s({p[0], p[1], p[2]}));
    } else if (name == "seven_qubit") {
        write_pure(seven_qubit_state());
    } else if (name == "product") {
        write_pure(product_zero_state(dims.empty() ? std::vector<int>{2, 2} : dims));
    } else if (name == "maximally_mixed") {
        write_mixed(maximally_mixed(dims.empty() ? std::vector<int>{2, 2} : dims));
    } else {
        throw std::invalid_argument(
            "unknown example (try bell, mes, ghz, rho_s, seven_qubit, product, maximally_mixed)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schmidt-number certification from quantum Fisher information"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("entdim ") + entdim::version);

    std::string state_path, out_path, basis = "gellmann", components = "xy", sign = "-";
    std::string vector_spec, d_list = "2,3,4,5", example_name;
    double j = 0.5;
    int max_r = 0, r = 0, restarts = 32, ex_d = 2, ex_r = 2, ex_n = 3;
    bool pure_exact = false, aligned = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::vector<double> pvec;
    std::vector<int> dims;

    auto* witness = app.add_subcommand("witness", "Schmidt-number witness report for a bipartite state");
    witness->add_option("state", state_path, "state JSON file")->required();
    witness->add_option("--basis", basis, "local operator basis (gellmann)");
    witness->add_option("--max-r", max_r, "largest candidate rank to report (default d)");
    witness->add_option("--out", out_path, "write the report to a file");

    auto* bound = app.add_subcommand("bound", "collective spin-variance bounds B_r");
    bound->add_option("--spin", j, "spin quantum number j")->required();
    bound->add_option("--components", components, "xy or xyz");
    bound->add_option("--sign", sign, "collective sign convention (+ or -)");
    bound->add_option("--r", r, "largest Schmidt rank (default 2j+1)");
    bound->add_option("--restarts", restarts, "optimizer restarts");
    bound->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_given = true; });
    bound->add_flag("--aligned", aligned, "restrict to j_z-aligned Schmidt bases");
    bound->add_option("--out", out_path, "write the report to a file");

    auto* certify = app.add_subcommand("certify", "dimensionality-vector certification");
    certify->add_option("state", state_path, "state JSON file")->required();
    certify->add_option("--vector", vector_spec,
                        "candidate vector, size classes separated by ';' (e.g. 2,2,2)");
    certify->add_flag("--pure-exact", pure_exact, "exact vector for pure states");
    certify->add_option("--out", out_path, "write the report to a file");

    auto* figure1 = app.add_subcommand("figure1", "CSV data: obs2 bounds and MES values");
    figure1->add_option("--d-list", d_list, "comma-separated local dimensions");

    auto* example = app.add_subcommand("example", "emit a factory state file");
    example->add_option("name", example_name, "bell|mes|ghz|rho_s|seven_qubit|product|maximally_mixed")
        ->required();
    example->add_option("--d", ex_d, "local dimension");
    example->add_option("--r", ex_r, "Schmidt rank");
    example->add_option("--n", ex_n, "number of parties");
    example->add_option("--p", pvec, "probability vector")->delimiter(',');
    example->add_option("--dims", dims, "subsystem dimensions")->delimiter(',');
    example->add_option("--out", out_path, "output state file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    }

    if (!seed_given) seed = default_seed();

    try {
        if (witness->parsed()) return cmd_witness(state_path, basis, max_r, out_path, seed);
        if (bound->parsed())
            return cmd_bound(j, components, sign, r, restarts, seed, aligned, out_path);
        if (certify->parsed()) {
            if (pure_exact == vector_spec.empty() && !pure_exact)
                throw std::invalid_argument("certify needs --vector or --pure-exact");
            return cmd_certify(state_path, vector_spec, pure_exact, out_path, seed);
        }
        if (figure1->parsed()) return cmd_figure1(d_list);
        if (example->parsed())
            return cmd_example(example_name, ex_d, ex_r, ex_n, pvec, dims, out_path);
    } catch (const entdim::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CapExceeded& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        return kExitUndecided;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
