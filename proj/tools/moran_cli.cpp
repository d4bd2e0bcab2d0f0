// Command-line front end: Moran-set construction, image computation,
// certification and the case-study catalogue, with machine-readable output.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "moran/json_io.hpp"

namespace {

using moran::json;

struct Args {
    std::string spec_path;
    std::string spec2_path;
    std::string model = "add";
    std::vector<std::string> u_boxes;
    std::string backend = "exact";
    double epsilon = 1e-12;
    std::size_t k = 4;
    std::size_t kmax = 6;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string format = "json";
    std::string out_path;
    bool require = false;
    std::string case_name;
    std::string lambda_text;
    std::string c_text;
    std::size_t search_rank = 4;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw moran::InvalidInput("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw moran::InvalidInput("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

template <class S>
moran::MoranSpec<S> load_spec(const std::string& path, const std::optional<std::uint64_t>& seed) {
    if (path.empty()) throw moran::InvalidInput("--spec is required");
    auto spec = moran::moran_spec_from_json<S>(read_json_file(path));
    if (seed) spec.seed = *seed;
    return spec;
}

template <class S>
moran::FunctionModel<S> parse_model(const std::string& arg) {
    const json* src = nullptr;
    json inline_json, file_json;
    if (!arg.empty() && arg.front() == '{') {
        try {
            inline_json = json::parse(arg);
        } catch (const std::exception& e) {
            throw moran::InvalidInput(std::string("malformed model JSON: ") + e.what());
        }
        src = &inline_json;
    } else if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") {
        file_json = read_json_file(arg);
        src = &file_json;
    }
    if (src) {
        if (!src->contains("poly")) throw moran::InvalidInput("model JSON must contain \"poly\"");
        std::vector<std::vector<S>> grid;
        for (const auto& row : src->at("poly")) {
            std::vector<S> r;
            for (const auto& v : row) r.push_back(moran::scalar_from_json<S>(v));
            grid.push_back(std::move(r));
        }
        return moran::models::polynomial<S>(std::move(grid));
    }
    return moran::models::by_name<S>(arg);
}

template <class S>
moran::DomainU<S> parse_domain(const std::vector<std::string>& boxes) {
    if (boxes.empty()) return moran::DomainU<S>::whole_plane();
    std::vector<moran::Rect<S>> rects;
    for (const auto& text : boxes) {
        std::vector<S> vals;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) vals.push_back(moran::ScalarTraits<S>::parse(item));
        if (vals.size() != 4)
            throw moran::InvalidInput("--u expects \"xlo,xhi,ylo,yhi\", got: " + text);
        rects.push_back({{vals[0], vals[1]}, {vals[2], vals[3]}});
    }
    return moran::DomainU<S>::from_boxes(std::move(rects));
}

template <class S>
moran::ImageOptions<S> image_options(const Args& args) {
    auto opt = moran::ImageOptions<S>::defaults();
    if constexpr (!moran::is_exact_v<S>) opt.merge_eps = args.epsilon;
    opt.caps = moran::Caps::from_env();
    opt.threads = args.threads;
    return opt;
}

void emit(const Args& args, const std::string& text) {
    if (args.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw moran::InvalidInput("cannot write file: " + args.out_path);
    out << text;
}

std::string csv_rank_table(const json& ranks) {
    std::string text = "k,count,measure,max_gap\n";
    for (const auto& row : ranks) {
        text += std::to_string(row.at("k").get<std::size_t>());
        text += ',';
        text += std::to_string(row.at("count").get<std::size_t>());
        text += ',';
        const auto cell = [](const json& v) {
            return v.is_string() ? v.get<std::string>() : v.dump();
        };
        text += cell(row.at("measure"));
        text += ',';
        text += cell(row.at("max_gap"));
        text += '\n';
    }
    return text;
}

template <class S>
int run_build(const Args& args) {
    const auto spec = load_spec<S>(args.spec_path, args.seed);
    const auto ls = moran::level_set(spec, args.k, moran::Caps::from_env());
    json j;
    j["schema"] = 1;
    j["command"] = "build";
    j["spec"] = moran::to_json(spec);
    j["k"] = args.k;
    j["count"] = ls.intervals.size();
    j["measure"] = moran::scalar_to_json(ls.set.measure());
    j["set"] = moran::to_json(ls.set);
    if (args.format != "json") throw moran::InvalidInput("build supports --format json only");
    emit(args, j.dump(2) + "\n");
    return 0;
}

template <class S>
int run_image(const Args& args) {
    const auto spec1 = load_spec<S>(args.spec_path, args.seed);
    const auto spec2 =
        args.spec2_path.empty() ? spec1 : load_spec<S>(args.spec2_path, args.seed);
    const auto f = parse_model<S>(args.model);
    const auto U = parse_domain<S>(args.u_boxes);
    const auto opt = image_options<S>(args);
    const auto seq = moran::image_sequence(f, spec1, spec2, U, args.k, opt);

    json ranks = json::array();
    for (const auto& row : seq.ranks) {
        json r;
        r["k"] = row.k;
        r["count"] = row.set.size();
        r["measure"] = moran::scalar_to_json(row.measure);
        r["max_gap"] = moran::scalar_to_json(row.max_gap);
        ranks.push_back(std::move(r));
    }
    if (args.format == "csv") {
        emit(args, csv_rank_table(ranks));
        return 0;
    }
    json j;
    j["schema"] = 1;
    j["command"] = "image";
    j["f"] = f.name;
    j["backend"] = args.backend;
    j["k_max"] = args.k;
    j["ranks"] = std::move(ranks);
    j["truncated"] = seq.truncated;
    emit(args, j.dump(2) + "\n");
    return 0;
}

template <class S>
int run_certify(const Args& args) {
    const auto spec1 = load_spec<S>(args.spec_path, args.seed);
    const auto spec2 =
        args.spec2_path.empty() ? spec1 : load_spec<S>(args.spec2_path, args.seed);
    const auto f = parse_model<S>(args.model);
    const auto U = parse_domain<S>(args.u_boxes);
    moran::CertifyOptions copt;
    copt.witness_rank_max = args.search_rank;
    const auto cert = moran::certify(spec1, spec2, f, U, copt, image_options<S>(args));

    json j = moran::to_json(cert);
    j["reverified"] = moran::verify_certificate(cert, spec1, spec2, f, U, image_options<S>(args));
    json out;
    out["schema"] = 1;
    out["command"] = "certify";
    out["f"] = f.name;
    out.update(j);
    if (args.format != "json") throw moran::InvalidInput("certify supports --format json only");
    emit(args, out.dump(2) + "\n");
    if (args.require && cert.status != moran::CertStatus::satisfied) return 2;
    return 0;
}

int run_case(const Args& args) {
    std::optional<moran::Rational> lambda, c;
    if (!args.lambda_text.empty()) lambda = moran::Rational::parse(args.lambda_text);
    if (!args.c_text.empty()) c = moran::Rational::parse(args.c_text);
    const auto rep =
        moran::cases::run_case(args.case_name, lambda, c, args.kmax, moran::Caps::from_env(),
                               args.threads);
    const json j = moran::to_json(rep);
    if (args.format == "csv") {
        emit(args, csv_rank_table(j.at("ranks")));
        return 0;
    }
    emit(args, j.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Args args;
    CLI::App app{"arithmetic on Moran sets: construction, images, certification"};
    app.require_subcommand(1);

    const auto add_common = [&](CLI::App* cmd, bool with_model) {
        cmd->add_option("--spec", args.spec_path, "Moran spec JSON path");
        cmd->add_option("--backend", args.backend, "exact | float")
            ->check(CLI::IsMember({"exact", "float"}));
        cmd->add_option("--epsilon", args.epsilon, "merge tolerance (float backend)");
        cmd->add_option("--seed", args.seed, "override the spec's layout seed");
        cmd->add_option("--threads", args.threads, "worker cap for pair enumeration");
        cmd->add_option("--format", args.format, "json | csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", args.out_path, "output path (default stdout)");
        if (with_model) {
            cmd->add_option("--spec2", args.spec2_path, "second factor spec (default: --spec)");
            cmd->add_option("--f", args.model,
                            "model name (add|sub|mul|div|sqrtsum) or poly JSON");
            cmd->add_option("--u", args.u_boxes, "open box \"xlo,xhi,ylo,yhi\" (repeatable)");
        }
    };

    auto* build = app.add_subcommand("build", "construct a rank-k level set");
    add_common(build, false);
    build->add_option("--k", args.k, "rank")->required();

    auto* image = app.add_subcommand("image", "per-rank outer images of f(E1, E2)");
    add_common(image, true);
    image->add_option("--k,--kmax", args.k, "maximum rank")->required();

    auto* certify = app.add_subcommand("certify", "interval-containment certificate");
    add_common(certify, true);
    certify->add_option("--search-rank", args.search_rank, "deepest witness search rank");
    certify->add_flag("--require", args.require, "exit 2 unless status is satisfied");

    auto* case_cmd = app.add_subcommand("case", "run a named case study");
    add_common(case_cmd, false);
    case_cmd->add_option("name", args.case_name, "steinhaus | cantor_product | kk_product | sqrt_sum | kk_div")
        ->required();
    case_cmd->add_option("--lambda", args.lambda_text, "IFS ratio (rational)");
    case_cmd->add_option("--c", args.c_text, "IFS offset parameter (rational)");
    case_cmd->add_option("--kmax", args.kmax, "maximum rank");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const bool exact = args.backend == "exact";
    try {
        if (build->parsed())
            return exact ? run_build<moran::Rational>(args) : run_build<double>(args);
        if (image->parsed())
            return exact ? run_image<moran::Rational>(args) : run_image<double>(args);
        if (certify->parsed())
            return exact ? run_certify<moran::Rational>(args) : run_certify<double>(args);
        return run_case(args);
    } catch (const moran::InvalidInput& e) {
        std::cerr << "error[input]: " << e.what() << "\n";
    } catch (const moran::CapExceeded& e) {
        std::cerr << "error[cap]: " << e.what() << "\n";
    } catch (const moran::NumericOverflow& e) {
        std::cerr << "error[overflow]: " << e.what() << "\n";
    } catch (const moran::DomainError& e) {
        std::cerr << "error[domain]: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
}
