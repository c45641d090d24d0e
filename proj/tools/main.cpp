// Command-line front end. Talks to the model exclusively through the C API
// so it exercises the same surface any other binding would.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "apqr/apqr.h"

namespace {

struct common_opts {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, common_opts& o) {
    cmd->add_option("--config", o.config_path,
                    "JSON configuration file (default: empty config)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_path,
                    "write the machine document here instead of stdout");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per case");
    cmd->add_option("--seed", o.seed, "Monte Carlo seed");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)")
        ->check(CLI::Range(0, 4096));
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

// The CLI deliberately has no JSON library; overrides are a flat object.
std::string overrides_json(const common_opts& o) {
    std::string body;
    auto add = [&body](const std::string& item) {
        if (!body.empty())
            body += ",";
        body += item;
    };
    if (o.trials)
        add("\"trials\":" + std::to_string(*o.trials));
    if (o.seed)
        add("\"seed\":" + std::to_string(*o.seed));
    if (o.threads)
        add("\"threads\":" + std::to_string(*o.threads));
    if (!o.format.empty())
        add("\"format\":\"" + json_escape(o.format) + "\"");
    return "{" + body + "}";
}

std::optional<std::string> read_file(const std::string& path,
                                     std::string& error) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        error = "cannot open " + path;
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        error = "failed reading " + path;
        return std::nullopt;
    }
    return buf.str();
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    apqr_string_free(s);
    return out;
}

int run_command(const std::string& command, const common_opts& o) {
    std::string config_text = "{}";
    if (!o.config_path.empty()) {
        std::string err;
        auto text = read_file(o.config_path, err);
        if (!text) {
            std::cerr << "config error: " << err << "\n";
            return APQR_E_CONFIG;
        }
        config_text = *text;
    }

    apqr_model* model = nullptr;
    char* create_error = nullptr;
    int rc = apqr_model_create(config_text.c_str(), &model, &create_error);
    if (rc != APQR_OK) {
        std::cerr << "config error: " << take_string(create_error) << "\n";
        return rc;
    }

    char* fmt_raw = nullptr;
    char* path_raw = nullptr;
    apqr_model_output(model, &fmt_raw, &path_raw);
    take_string(fmt_raw); // format default is applied by the run itself
    std::string out_path = take_string(path_raw);
    if (!o.out_path.empty())
        out_path = o.out_path;

    char* document = nullptr;
    char* human = nullptr;
    char* run_error = nullptr;
    std::string ov = overrides_json(o);
    int code = apqr_model_run(model, command.c_str(), ov.c_str(), &document,
                              &human, &run_error);
    std::string doc = take_string(document);
    std::string summary = take_string(human);
    std::string err = take_string(run_error);
    apqr_model_destroy(model);

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        out << doc;
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return APQR_E_COMPUTE;
        }
    } else {
        std::cout << doc;
    }
    if (!summary.empty())
        std::cerr << summary << "\n";
    else if (!err.empty())
        std::cerr << err << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"All-photonic quantum repeater performance model"};
    app.set_version_flag("--version", std::string(apqr_version()));
    app.require_subcommand(1);

    struct sub {
        const char* name;
        const char* help;
    };
    const sub subs[] = {
        {"evaluate", "compute rates, costs, and errors for one configuration"},
        {"optimize", "search tree shapes and multiplexing for the best cost"},
        {"sweep", "optimize across a grid of link configurations"},
        {"mc", "Monte Carlo validation of the analytic formulas"},
        {"oracle", "stabilizer-vs-statevector self checks"},
    };

    common_opts opts[5];
    CLI::App* cmds[5];
    for (int i = 0; i < 5; ++i) {
        cmds[i] = app.add_subcommand(subs[i].name, subs[i].help);
        add_common(cmds[i], opts[i]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return APQR_E_CONFIG;
    }

    for (int i = 0; i < 5; ++i)
        if (cmds[i]->parsed())
            return run_command(subs[i].name, opts[i]);
    return APQR_E_CONFIG;
}
