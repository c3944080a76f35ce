#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "tdakit/pipeline.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"tdakit: topological feature extraction"};
    app.require_subcommand(1);

    struct Bound {
        CLI::App* sub;
        std::map<std::string, std::string> values;
        std::map<std::string, bool> flags;
    };
    std::vector<Bound> bound;
    bound.reserve(tdakit::command_specs().size());
    for (const auto& spec : tdakit::command_specs()) {
        auto& b = bound.emplace_back();
        b.sub = app.add_subcommand(spec.name, spec.help);
        for (const auto& opt : spec.options) {
            if (opt.flag)
                b.sub->add_flag("--" + opt.key, b.flags[opt.key], opt.help);
            else
                b.sub->add_option("--" + opt.key, b.values[opt.key], opt.help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : tdakit::kExitValidation;
    }

    for (auto& b : bound) {
        if (!b.sub->parsed())
            continue;
        tdakit::RunConfig cfg;
        cfg.command = b.sub->get_name();
        for (const auto& [key, value] : b.values)
            if (b.sub->count("--" + key) > 0)
                cfg.options[key] = value;
        for (const auto& [key, on] : b.flags)
            if (on)
                cfg.options[key] = "true";
        return tdakit::run_pipeline(cfg, std::cout, std::cerr);
    }
    return tdakit::kExitValidation;
}
