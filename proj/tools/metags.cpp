// metags command-line front end
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "json.hpp"

#include "metags/instances.hpp"
#include "metags/meta_tree.hpp"
#include "metags/solver.hpp"

using namespace metags;
using nlohmann::json;

namespace {

// exit codes: 0 ok, 1 an asserted check failed, 2 bad input or refusal
constexpr int kCheckFailed = 1;
constexpr int kBadInput = 2;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << text;
}

std::string g17(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::vector<int> parse_dims(const std::string& s) {
    std::vector<int> d;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        try {
            d.push_back(std::stoi(part));
        } catch (const std::exception&) {
            throw InvalidInput("bad --dims '" + s + "', expected e.g. 10x10");
        }
    }
    if (d.empty()) throw InvalidInput("empty --dims");
    return d;
}

LocalHamiltonian load_hamiltonian(const InteractionTree& t, const std::string& model, const std::string& ham_path,
                                  std::uint64_t seed) {
    if (!ham_path.empty()) return hamiltonian_from_json(read_json(ham_path), t);
    json params = json::object();
    if (model == "random") params["seed"] = seed;
    return make_model(model, t, params);
}

std::string bench_header() {
    return "name,shape,model,n,D,gap,E0,delta,markov,iterations,budget,max_bond,vertex_seconds,seconds\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"metags: ground spaces of gapped local Hamiltonians on trees"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_path, params_path;
    app.add_option("--threads", threads, "thread cap for the linear algebra")->check(CLI::PositiveNumber);

    // gen-tree
    auto* gen = app.add_subcommand("gen-tree", "generate an interaction tree");
    std::string kind;
    int n = 0, order = 1, max_degree = 3, q = 2;
    std::string dims, pruefer;
    gen->add_option("kind", kind, "path | star | vicsek | ust | dla | random | pruefer")->required();
    gen->add_option("--n", n, "number of vertices (leaves for star)");
    gen->add_option("--order", order, "Vicsek order");
    gen->add_option("--dims", dims, "grid for ust, e.g. 10x10");
    gen->add_option("--max-degree", max_degree, "degree cap for random");
    gen->add_option("--pruefer", pruefer, "comma separated sequence");
    gen->add_option("--q", q, "local dimension");
    auto* gen_seed = gen->add_option("--seed", seed, "seed (required for ust, dla, random)");
    gen->add_option("--out", out_path, "output JSON (stdout if omitted)");

    // fractal-dim
    auto* frac = app.add_subcommand("fractal-dim", "ball-growth profile and fractal dimension");
    std::string tree_path;
    double C = 2.0;
    int probes = 16;
    frac->add_option("tree", tree_path, "tree JSON")->required();
    frac->add_option("--C", C, "dimension constant");
    frac->add_option("--probes", probes, "probe vertices for the profile");
    frac->add_option("--seed", seed, "probe seed");
    frac->add_option("--out", out_path, "profile CSV (stdout if omitted)");

    // build-meta
    auto* meta = app.add_subcommand("build-meta", "META-tree of a tree");
    meta->add_option("tree", tree_path, "tree JSON")->required();
    meta->add_option("--out", out_path, "output JSON (stdout if omitted)");

    // solve
    auto* solve = app.add_subcommand("solve", "ground space of a local Hamiltonian");
    std::string model = "heisenberg", ham_path, tn_path;
    double gap = 0, eps = 0;
    int degeneracy = 0;
    bool oracle = false;
    solve->add_option("tree", tree_path, "tree JSON")->required();
    solve->add_option("--model", model, "heisenberg | tfim | random");
    solve->add_option("--ham", ham_path, "Hamiltonian JSON (overrides --model)");
    auto* o_gap = solve->add_option("--gap", gap, "promised gap; with --oracle it defaults to the exact one");
    auto* o_deg = solve->add_option("--degeneracy", degeneracy, "promised ground-space dimension");
    auto* o_eps = solve->add_option("--eps", eps, "target closeness");
    auto* o_seed = solve->add_option("--seed", seed, "solver seed");
    solve->add_option("--params", params_path, "solver parameter JSON");
    solve->add_flag("--oracle", oracle, "exact verification and closeness report");
    solve->add_option("--out", out_path, "report JSON (stdout if omitted)");

    // verify
    auto* verify = app.add_subcommand("verify", "recompute closeness from a saved report");
    std::string report_path;
    verify->add_option("report", report_path, "report JSON written by solve")->required();
    verify->add_option("tree", tree_path, "tree JSON")->required();
    verify->add_option("--model", model, "heisenberg | tfim | random");
    verify->add_option("--ham", ham_path, "Hamiltonian JSON");
    verify->add_option("--seed", seed, "seed of a random model");
    verify->add_option("--out", out_path, "verification JSON (stdout if omitted)");

    // bench
    auto* bench = app.add_subcommand("bench", "run an instance suite");
    std::string suite = "acceptance";
    bench->add_option("--suite", suite, "acceptance | small | empty");
    bench->add_option("--params", params_path, "solver parameter JSON");
    bench->add_option("--out", out_path, "CSV (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);
    Eigen::setNbThreads(threads);

    try {
        if (*gen) {
            InteractionTree t;
            auto need_seed = [&] {
                if (gen_seed->count() == 0) throw InvalidInput("'" + kind + "' is stochastic, pass --seed");
            };
            if (kind == "path") t = gen_path(n, q);
            else if (kind == "star") t = gen_star(n, q);
            else if (kind == "vicsek") t = gen_vicsek(order, q);
            else if (kind == "ust") need_seed(), t = gen_ust(parse_dims(dims), seed, q);
            else if (kind == "dla") need_seed(), t = gen_dla(n, seed, q);
            else if (kind == "random") need_seed(), t = gen_random_tree(n, max_degree, seed, q);
            else if (kind == "pruefer") {
                std::vector<int> seq;
                std::stringstream ss(pruefer);
                std::string part;
                while (std::getline(ss, part, ',')) seq.push_back(std::stoi(part));
                t = tree_from_pruefer(seq, q);
            } else {
                std::cerr << "unknown tree kind '" << kind << "'\n" << gen->help();
                return kBadInput;
            }
            write_text(out_path, to_json(t).dump(1) + "\n");
            return 0;
        }
        if (*frac) {
            auto t = tree_from_json(read_json(tree_path));
            auto fd = fractal_dimension(t, C);
            auto prof = ball_growth_profile(t, std::min(probes, t.n()), seed);
            write_text(out_path, prof.csv());
            std::cerr << "beta " << g17(fd.beta) << " at vertex " << fd.x << " radius " << fd.r << " (C " << g17(C)
                      << "), profile slope " << g17(prof.slope) << " over r in [" << prof.fit_rmin << ", "
                      << prof.fit_rmax << "]\n";
            return 0;
        }
        if (*meta) {
            auto t = tree_from_json(read_json(tree_path));
            MetaTree mt(t);
            auto j = mt.to_json();
            j["depth_bound"] = meta_depth_bound(t);
            write_text(out_path, j.dump(1) + "\n");
            return 0;
        }
        if (*solve) {
            auto t = tree_from_json(read_json(tree_path));
            auto h = load_hamiltonian(t, model, ham_path, seed);
            const auto N = static_cast<Eigen::Index>(ipow(t.local_dim(), t.n()));
            if (N > kVectorBudget) {
                std::cerr << "refusing: the register has dimension " << N << ", above the vector budget "
                          << kVectorBudget << "\n";
                return kBadInput;
            }
            // flags > params file > defaults
            SolverParams p = params_path.empty() ? SolverParams{} : SolverParams::from_json(read_json(params_path));
            if (o_gap->count()) p.gap = gap;
            if (o_deg->count()) p.degeneracy = degeneracy;
            if (o_eps->count()) p.eps = eps;
            if (o_seed->count()) p.seed = seed;
            if (oracle) p.oracle = true;
            if (p.oracle && !(p.gap > 0)) {
                auto g = exact_ground_space(h);
                if (!g.gapped) throw PreconditionError("the oracle found no gap");
                p.gap = g.gap;
                if (!o_deg->count()) p.degeneracy = g.D;
            }
            if (!(p.gap > 0)) throw InvalidInput("pass --gap (or --oracle to take it from the exact spectrum)");
            auto rep = gs(h, p);
            auto j = rep.to_json();
            j["tree_hash"] = std::to_string(t.hash());
            j["model"] = ham_path.empty() ? model : "file";
            j["constants"] = {{"dense_budget", kDenseBudget},
                              {"vector_budget", kVectorBudget},
                              {"tce_c", tce_constant_c(t.d())},
                              {"k_default", 40 * t.d()},
                              {"threads", threads}};
            j["tn"] = rep.tn.to_json();
            write_text(out_path, j.dump(1) + "\n");
            if (rep.has_oracle) {
                std::cerr << "delta " << g17(rep.delta) << " (eps " << g17(p.eps) << ")\n";
                return rep.delta <= p.eps ? 0 : kCheckFailed;
            }
            return 0;
        }
        if (*verify) {
            auto t = tree_from_json(read_json(tree_path));
            auto j = read_json(report_path);
            if (!j.contains("tn")) throw InvalidInput("report has no MetaTN dump");
            if (j.contains("tree_hash") && j.at("tree_hash").get<std::string>() != std::to_string(t.hash()))
                throw InvalidInput("report was written for a different tree");
            auto h = load_hamiltonian(t, model, ham_path, seed);
            auto mt = std::make_shared<const MetaTree>(t);
            auto tn = MetaTN::from_json(j.at("tn"), mt);
            auto g = exact_ground_space(h);
            auto c = closeness(tn.encoded_subspace(), g.Z);
            const double eps_target = j.at("params").value("eps", 1e-4);
            json out = {{"delta", c.delta}, {"same_dim", c.same_dim}, {"oracle_D", g.D}, {"eps", eps_target}};
            bool ok = c.delta <= eps_target;
            if (j.contains("delta")) {
                double saved = j.at("delta").get<double>();
                out["saved_delta"] = saved;
                out["matches_saved"] = std::abs(saved - c.delta) <= 1e-12;
                ok = ok && std::abs(saved - c.delta) <= 1e-12;
            }
            out["ok"] = ok;
            write_text(out_path, out.dump(1) + "\n");
            return ok ? 0 : kCheckFailed;
        }
        if (*bench) {
            std::vector<Instance> list;
            if (suite == "acceptance") list = acceptance_suite();
            else if (suite == "small") list = small_suite();
            else if (suite != "empty") {
                std::cerr << "unknown suite '" << suite << "'\n";
                return kBadInput;
            }
            SolverParams base = params_path.empty() ? SolverParams{} : SolverParams::from_json(read_json(params_path));
            std::ostringstream csv;
            csv << bench_header();
            bool ok = true;
            for (const auto& in : list) {
                auto h = instance_hamiltonian(in);
                auto g = exact_ground_space(h);
                SolverParams p = base;
                p.gap = g.gap;
                p.degeneracy = g.D;
                p.oracle = true;
                auto rep = gs(h, p);
                double vs = 0;
                for (const auto& v : rep.vertices) vs += v.seconds;
                ok = ok && rep.delta <= p.eps;
                csv << in.name << ',' << in.shape << ',' << in.model << ',' << in.n << ',' << g.D << ',' << g17(g.gap)
                    << ',' << g17(g.E0) << ',' << g17(rep.delta) << ',' << g17(rep.markov) << ','
                    << rep.final.iterations << ',' << rep.final.budget << ',' << rep.tn.max_bond() << ','
                    << g17(vs) << ',' << g17(rep.seconds) << '\n';
                std::cerr << in.name << ": delta " << g17(rep.delta) << " in " << g17(rep.seconds) << " s\n";
            }
            write_text(out_path, csv.str());
            return ok ? 0 : kCheckFailed;
        }
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const BudgetExceeded& e) {
        std::cerr << "refusing: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
    return 0;
}
