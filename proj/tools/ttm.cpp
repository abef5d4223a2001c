// ttm: command-line front end for tournament-tree preference elicitation.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value && *value ? value : fallback;
}

} // namespace

int main(int argc, char** argv) {
    using namespace ttm::cli;

    CLI::App app{"Tournament-tree preference elicitation"};
    app.require_subcommand(1);

    ElicitOptions elicit_opts;
    std::string policy = "sequential";
    std::optional<std::string> out_path;
    std::optional<std::string> match_matrix_out;
    std::optional<long long> card_cap;
    bool no_card_cap = false;
    auto* elicit_cmd = app.add_subcommand("elicit", "Run the tournament interactively");
    elicit_cmd->add_option("--objects", elicit_opts.objects, "Comma-separated object names");
    elicit_cmd->add_option("--policy", policy, "Pairing policy")
        ->check(CLI::IsMember({"sequential", "explicit"}));
    elicit_cmd->add_option("--out", out_path, "Write the results document here");
    elicit_cmd->add_option("--match-matrix-out", match_matrix_out,
                           "Write the match matrix CSV here");
    elicit_cmd->add_option("--session", elicit_opts.session_file,
                           "Resumable session file (default ttm-session.json)");
    elicit_cmd->add_flag("--resume", elicit_opts.resume, "Continue the session in --session");
    elicit_cmd->add_flag("--allow-ties", elicit_opts.allow_ties, "Accept 'tie' as an answer");
    elicit_cmd->add_option("--card-cap", card_cap, "Maximum cards per comparison (default 100)")
        ->check(CLI::NonNegativeNumber);
    elicit_cmd->add_flag("--no-card-cap", no_card_cap, "Do not limit the number of cards");

    std::string input;
    std::optional<std::string> objects;
    std::optional<std::string> output;
    auto* build_cmd = app.add_subcommand("build", "Match matrix CSV -> preference matrix CSV");
    build_cmd->add_option("--match-matrix", input, "winner,loser,units rows")->required();
    build_cmd->add_option("--objects", objects, "Pin the object order (comma-separated)");
    build_cmd->add_option("--out", output, "Output CSV (default stdout)");

    auto* eval_cmd = app.add_subcommand("eval", "Preference matrix CSV -> results document");
    eval_cmd->add_option("--matrix", input, "m x m integer CSV")->required();
    eval_cmd->add_option("--objects", objects, "Object names (default a1..am)");
    eval_cmd->add_option("--out", output, "Output JSON (default stdout)");

    auto* check_cmd = app.add_subcommand("check", "Reciprocity and consistency report");
    check_cmd->add_option("--matrix", input, "m x m integer CSV")->required();
    check_cmd->add_option("--objects", objects, "Object names (default a1..am)");

    std::string host = "0.0.0.0";
    int port = std::atoi(env_or("PORT", "8080").c_str());
    std::string data_dir = env_or("DATA_DIR", "./ttm-data");
    std::optional<std::string> web_root;
    if (const char* root = std::getenv("WEB_ROOT")) {
        web_root = root;
    }
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP session service");
    serve_cmd->add_option("--host", host, "Listen address");
    serve_cmd->add_option("--port", port, "Listen port (env PORT)");
    serve_cmd->add_option("--data-dir", data_dir, "Session directory (env DATA_DIR)");
    serve_cmd->add_option("--web-root", web_root, "Static web bundle to serve (env WEB_ROOT)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (*elicit_cmd) {
        if (!elicit_opts.resume && elicit_opts.objects.empty()) {
            std::cerr << "ttm elicit: --objects is required unless --resume is given\n";
            return exit_usage;
        }
        elicit_opts.policy = ttm::pairing_policy_from_string(policy);
        if (no_card_cap) {
            elicit_opts.card_cap.reset();
        } else if (card_cap) {
            elicit_opts.card_cap = *card_cap;
        }
        if (out_path) {
            elicit_opts.out = *out_path;
        }
        if (match_matrix_out) {
            elicit_opts.match_matrix_out = *match_matrix_out;
        }
        install_interrupt_handler();
        return elicit(elicit_opts, std::cin, std::cout, std::cerr);
    }
    std::optional<std::filesystem::path> out_file;
    if (output) {
        out_file = *output;
    }
    if (*build_cmd) {
        return build(input, objects, out_file, std::cout, std::cerr);
    }
    if (*eval_cmd) {
        return eval(input, objects, out_file, std::cout, std::cerr);
    }
    if (*check_cmd) {
        return check(input, objects, std::cout, std::cerr);
    }
    std::optional<std::filesystem::path> root;
    if (web_root) {
        root = *web_root;
    }
    return serve(host, port, data_dir, root, std::cout, std::cerr);
}
