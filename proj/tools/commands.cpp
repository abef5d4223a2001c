#include "commands.hpp"

#include <atomic>
#include <csignal>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ttm/error.hpp"
#include "ttm/evaluation.hpp"
#include "ttm/matrix_builder.hpp"
#include "ttm/service.hpp"
#include "ttm/session.hpp"
#include "ttm/session_store.hpp"

namespace ttm::cli {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted = true; }

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

int report_error(const Error& e, std::ostream& err) {
    err << "ttm: " << e.what() << '\n';
    return e.code() == ErrorCode::inconsistent ? exit_domain : exit_usage;
}

ObjectSet objects_for(const std::optional<std::string>& list, std::size_t m) {
    if (!list) {
        return ObjectSet::numbered(m);
    }
    ObjectSet objects(parse_names(*list));
    if (objects.size() != m) {
        throw Error(ErrorCode::invalid_argument,
                    "--objects lists " + std::to_string(objects.size()) +
                        " names but the matrix has dimension " + std::to_string(m));
    }
    return objects;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    write_file_atomic(path, text);
}

void print_results(const ObjectSet& objects, const ValueScale& scale, std::ostream& out) {
    const auto ranks = ranking(scale);
    out << "Ranking: ";
    for (std::size_t g = 0; g < ranks.size(); ++g) {
        if (g > 0) {
            out << " > ";
        }
        for (std::size_t k = 0; k < ranks[g].size(); ++k) {
            out << (k > 0 ? " = " : "") << objects.name(ranks[g][k]);
        }
    }
    out << '\n';

    std::size_t width = 6;
    for (const auto& name : objects.names()) {
        width = std::max(width, name.size());
    }
    out << std::left << std::setw(static_cast<int>(width)) << "object" << "  "
        << std::right << std::setw(6) << "u" << "  " << std::setw(8) << "v" << '\n';
    for (const auto& group : ranks) {
        for (const ObjectId id : group) {
            out << std::left << std::setw(static_cast<int>(width)) << objects.name(id) << "  "
                << std::right << std::setw(6) << scale.u[id] << "  " << std::setw(8)
                << format_decimal(scale.v[id]) << '\n';
        }
    }
    out << std::left;
    if (scale.degenerate) {
        out << "All objects are tied; no cards between levels.\n";
        return;
    }
    out << "Cards between consecutive levels:";
    for (const auto c : card_distribution(scale, ranks)) {
        out << ' ' << c;
    }
    out << '\n';
}

/// Reads one line; false on EOF or interrupt.
bool read_line(std::istream& in, std::string& line) {
    if (interrupted() || !std::getline(in, line) || interrupted()) {
        return false;
    }
    line = trim(line);
    return true;
}

struct Stop {};

std::vector<ProposedPair> ask_pairings(const Session& session, std::istream& in, std::ostream& out) {
    const auto& t = session.tournament;
    const auto& objects = session.objects();
    while (true) {
        out << "Round " << t.round << " contenders:";
        for (std::size_t i = 0; i < t.alive.size(); ++i) {
            out << "  " << i + 1 << ") " << objects.name(t.alive[i]);
        }
        out << "\nEnter the pairs as position numbers, e.g. \"1 2, 3 4\""
            << (t.alive.size() % 2 ? " plus the bye as a single number" : "") << ": ";
        std::string line;
        if (!read_line(in, line)) {
            throw Stop{};
        }
        std::vector<ProposedPair> pairs;
        bool ok = true;
        std::stringstream groups(line);
        std::string group;
        while (ok && std::getline(groups, group, ',')) {
            std::stringstream numbers(group);
            std::vector<std::size_t> picks;
            std::string token;
            while (numbers >> token) {
                try {
                    const auto pos = std::stoul(token);
                    ok = pos >= 1 && pos <= t.alive.size();
                    if (ok) {
                        picks.push_back(t.alive[pos - 1]);
                    }
                } catch (const std::exception&) {
                    ok = false;
                }
            }
            if (picks.size() == 2) {
                pairs.emplace_back(picks[0], picks[1]);
            } else if (picks.size() == 1) {
                pairs.emplace_back(picks[0], std::nullopt);
            } else {
                ok = false;
            }
        }
        if (ok) {
            try {
                set_pairings(t, pairs);
                return pairs;
            } catch (const Error& e) {
                out << e.what() << '\n';
                continue;
            }
        }
        out << "Could not read that pairing; try again.\n";
    }
}

/// Returns the recorded session after one answered match.
Session ask_match(const Session& session, const Pairing& pairing, std::istream& in,
                  std::ostream& out) {
    const auto& objects = session.objects();
    const auto& left = objects.name(pairing.left);
    const auto& right = objects.name(*pairing.right);
    const auto& config = session.tournament.config;

    std::optional<ObjectId> winner;
    bool tie = false;
    while (!winner && !tie) {
        out << "Round " << session.tournament.round << ". Which do you prefer, " << left << " or "
            << right << "? ";
        std::string answer;
        if (!read_line(in, answer)) {
            throw Stop{};
        }
        if (answer == left || answer == "1") {
            winner = pairing.left;
        } else if (answer == right || answer == "2") {
            winner = *pairing.right;
        } else if (answer == "tie" && config.allow_ties) {
            tie = true;
        } else {
            out << "Please answer " << left << " (1) or " << right << " (2)"
                << (config.allow_ties ? ", or tie" : "") << ".\n";
        }
    }
    if (tie) {
        return submit_tie(session, pairing.pairing_id);
    }
    while (true) {
        out << "How many cards between them? ";
        std::string answer;
        if (!read_line(in, answer)) {
            throw Stop{};
        }
        std::size_t used = 0;
        long long cards = -1;
        try {
            cards = std::stoll(answer, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != answer.size()) {
            out << "Please enter a whole number of cards (0 means a minimal difference).\n";
            continue;
        }
        try {
            return submit_match(session, pairing.pairing_id, *winner, cards);
        } catch (const Error& e) {
            out << e.what() << '\n';
        }
    }
}

void save_session_file(const std::filesystem::path& path, const Session& session) {
    write_text(path, canonical_dump(save_session(session)) + "\n");
}

} // namespace

std::vector<std::string> parse_names(const std::string& list) {
    std::vector<std::string> names;
    std::stringstream in(list);
    std::string name;
    while (std::getline(in, name, ',')) {
        names.push_back(trim(name));
    }
    if (!list.empty() && list.back() == ',') {
        names.emplace_back();
    }
    return names;
}

void install_interrupt_handler() {
    struct sigaction action {};
    action.sa_handler = on_sigint;
    sigemptyset(&action.sa_mask);
    action.sa_flags = 0;  // no SA_RESTART: a blocked read returns so we can save
    sigaction(SIGINT, &action, nullptr);
}

bool interrupted() { return g_interrupted.load(); }

int elicit(const ElicitOptions& options, std::istream& in, std::ostream& out, std::ostream& err) {
    std::optional<Session> loaded;
    try {
        if (options.resume) {
            loaded = load_session(nlohmann::json::parse(read_file(options.session_file)));
            out << "Resuming session from " << options.session_file.string() << ".\n";
        } else {
            ElicitationConfig config{options.allow_ties, options.card_cap};
            loaded = start_session(ObjectSet(parse_names(options.objects)), options.policy, config);
            save_session_file(options.session_file, *loaded);
        }
    } catch (const Error& e) {
        return report_error(e, err);
    } catch (const nlohmann::json::exception& e) {
        err << "ttm: " << options.session_file.string() << ": " << e.what() << '\n';
        return exit_usage;
    }

    Session session = std::move(*loaded);
    try {
        while (session.phase == Phase::eliciting) {
            const auto& t = session.tournament;
            if (t.awaiting_pairings()) {
                session = submit_pairings(session, ask_pairings(session, in, out));
                save_session_file(options.session_file, session);
                continue;
            }
            const Pairing* next = nullptr;
            for (const auto& p : t.pending) {
                if (!p.resolved()) {
                    next = &p;
                    break;
                }
            }
            session = ask_match(session, *next, in, out);
            save_session_file(options.session_file, session);
        }
    } catch (const Stop&) {
        save_session_file(options.session_file, session);
        err << '\n'
            << (interrupted() ? "Interrupted" : "Input ended") << "; session saved to "
            << options.session_file.string() << ". Resume with: ttm elicit --resume --session "
            << options.session_file.string() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        return report_error(e, err);
    }

    if (session.phase != Phase::results) {
        err << "ttm: session is already past the tournament (phase " << to_string(session.phase)
            << ")\n";
    }
    try {
        out << '\n';
        print_results(session.objects(), *session.scale, out);
        const auto doc = tournament_results(session);
        if (options.out) {
            write_text(*options.out, canonical_dump(doc) + "\n");
            out << "Results written to " << options.out->string() << ".\n";
        }
        if (options.match_matrix_out) {
            write_text(*options.match_matrix_out,
                       match_matrix_to_csv(match_matrix(session.tournament), session.objects()));
        }
    } catch (const Error& e) {
        return report_error(e, err);
    }
    return exit_ok;
}

int build(const std::filesystem::path& match_matrix, const std::optional<std::string>& objects,
          const std::optional<std::filesystem::path>& out_path, std::ostream& out,
          std::ostream& err) {
    try {
        std::optional<ObjectSet> set;
        if (objects) {
            set.emplace(parse_names(*objects));
        }
        const auto [names, matches] =
            import_match_matrix(read_file(match_matrix), set, match_matrix.string());
        const auto csv = to_csv(build_preference_matrix(matches));
        if (out_path) {
            write_text(*out_path, csv);
        } else {
            out << csv;
        }
        return exit_ok;
    } catch (const Error& e) {
        return report_error(e, err);
    }
}

int eval(const std::filesystem::path& matrix_path, const std::optional<std::string>& objects,
         const std::optional<std::filesystem::path>& out_path, std::ostream& out,
         std::ostream& err) {
    try {
        const auto matrix =
            preference_matrix_from_csv(read_file(matrix_path), matrix_path.string());
        const auto set = objects_for(objects, matrix.size());
        const auto report = check_consistency(matrix);
        if (!report.consistent) {
            err << "ttm: " << matrix_path.string() << " is "
                << (report.reciprocal ? "inconsistent" : "not reciprocal")
                << "; run `ttm check` for details\n";
            return exit_domain;
        }
        const auto scale = value_scale(matrix, find_champion(matrix));
        const auto doc = canonical_dump(results_document(set, scale)) + "\n";
        if (out_path) {
            write_text(*out_path, doc);
            print_results(set, scale, out);
        } else {
            out << doc;
        }
        return exit_ok;
    } catch (const Error& e) {
        return report_error(e, err);
    }
}

int check(const std::filesystem::path& matrix_path, const std::optional<std::string>& objects,
          std::ostream& out, std::ostream& err) {
    try {
        const auto matrix =
            preference_matrix_from_csv(read_file(matrix_path), matrix_path.string());
        const auto set = objects_for(objects, matrix.size());
        const auto report = check_consistency(matrix);
        if (!report.reciprocal) {
            out << "not reciprocal:";
            for (ObjectId i = 0; i < matrix.size(); ++i) {
                for (ObjectId j = i; j < matrix.size(); ++j) {
                    if (matrix.at(i, j) + matrix.at(j, i) != 0) {
                        out << " (" << set.name(i) << ", " << set.name(j) << ")";
                    }
                }
            }
            out << '\n';
            return exit_domain;
        }
        if (report.consistent) {
            out << "reciprocal and consistent (" << matrix.size() << " objects)\n";
            return exit_ok;
        }
        out << "inconsistent: " << report.violations.size() << " violating triples\n";
        for (const auto& v : report.violations) {
            out << "  i=" << set.name(v.i) << " j=" << set.name(v.j) << " k=" << set.name(v.k)
                << ": M[i][k] + M[k][j] - M[i][j] = " << v.residual << '\n';
        }
        return exit_domain;
    } catch (const Error& e) {
        return report_error(e, err);
    }
}

int serve(const std::string& host, int port, const std::filesystem::path& data_dir,
          const std::optional<std::filesystem::path>& web_root, std::ostream& out,
          std::ostream& err) {
    try {
        FileSessionStore store(data_dir);
        Service service(store);
        HttpServer server(service, web_root);
        const int bound = server.bind(host, port);
        if (bound <= 0) {
            err << "ttm: cannot bind " << host << ":" << port << '\n';
            return exit_usage;
        }
        out << "listening on http://" << host << ":" << bound << " (data in "
            << data_dir.string() << ")" << std::endl;
        server.listen();
        return exit_ok;
    } catch (const Error& e) {
        return report_error(e, err);
    }
}

} // namespace ttm::cli
