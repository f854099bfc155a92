// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/run_config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <string>

#include "elevator/error.hpp"

namespace elevator {

using nlohmann::json;

namespace {

const std::vector<std::pair<RunMode, std::string_view>> kModeNames = {
    {RunMode::baseline_t2v, "baseline_t2v"},         {RunMode::baseline_t2i, "baseline_t2i"},
    {RunMode::elevate, "elevate"},                   {RunMode::ablate_filter, "ablate_filter"},
    {RunMode::ablate_inversion, "ablate_inversion"}, {RunMode::ablate_steps, "ablate_steps"},
    {RunMode::roundtrip, "roundtrip"},
};

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::invalid_config, msg); }

void reject_unknown(const json& j, const std::string& where, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) bad(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto k : keys) known = known || key == k;
        if (!known) bad(where + ": unknown field '" + key + "'");
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        bad(where + "." + key + ": " + e.what());
    }
}

template <class Enum, class Parse>
void read_enum(const json& j, const char* key, Enum& out, const std::string& where, Parse parse) {
    if (!j.contains(key)) return;
    std::string name;
    read(j, key, name, where);
    try {
        out = parse(name);
    } catch (const Error& e) {
        bad(where + "." + key + ": " + e.what());
    }
}

json prior_json(const PriorConfig& p) {
    return {{"rho", p.rho}, {"spectrum", to_string(p.spectrum)}, {"variance_scale", p.variance_scale}};
}

void prior_from(const json& j, PriorConfig& p, const std::string& where) {
    reject_unknown(j, where, {"rho", "spectrum", "variance_scale"});
    read(j, "rho", p.rho, where);
    read_enum(j, "spectrum", p.spectrum, where, spectrum_kind_from_string);
    read(j, "variance_scale", p.variance_scale, where);
}

json schedule_json(const ScheduleConfig& s) {
    return {{"kind", to_string(s.kind)},           {"total_steps", s.total_steps},
            {"beta_start", s.params.beta_start},   {"beta_end", s.params.beta_end},
            {"cosine_offset", s.params.cosine_offset}, {"max_beta", s.params.max_beta}};
}

void schedule_from(const json& j, ScheduleConfig& s, const std::string& where) {
    reject_unknown(j, where, {"kind", "total_steps", "beta_start", "beta_end", "cosine_offset", "max_beta"});
    read_enum(j, "kind", s.kind, where, schedule_kind_from_string);
    read(j, "total_steps", s.total_steps, where);
    read(j, "beta_start", s.params.beta_start, where);
    read(j, "beta_end", s.params.beta_end, where);
    read(j, "cosine_offset", s.params.cosine_offset, where);
    read(j, "max_beta", s.params.max_beta, where);
}

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) bad("bad seed '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::string_view to_string(RunMode mode) {
    for (const auto& [m, name] : kModeNames)
        if (m == mode) return name;
    return "unknown";
}

RunMode run_mode_from_string(std::string_view name) {
    for (const auto& [m, n] : kModeNames)
        if (n == name) return m;
    bad("unknown mode '" + std::string(name) + "'");
}

const std::vector<RunMode>& all_run_modes() {
    static const std::vector<RunMode> modes = [] {
        std::vector<RunMode> out;
        for (const auto& [m, name] : kModeNames) out.push_back(m);
        return out;
    }();
    return modes;
}

void RunConfig::validate() const {
    if (seeds.empty()) bad("seeds must be nonempty");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) bad("seeds must be distinct");
    if (output_dir.empty()) bad("output_dir must be set");
    if (shape.numel() == 0) bad("shape must be nonzero in every dimension");
    if (shape.frames < 2 || shape.height < 2 || shape.width < 2)
        bad("shape needs at least 2 frames and 2x2 pixels for the metrics");
    if (steps < 1) bad("steps must be >= 1");
    if (refine_steps < 0 || refine_steps > steps) bad("refine_steps must lie in [0, steps]");
    if (n_sdedit < 0) bad("n_sdedit must be >= 0");
    if (!(eta_t2v >= 0.0 && eta_t2v <= 1.0) || !(eta_t2i >= 0.0 && eta_t2i <= 1.0)) bad("eta must lie in [0, 1]");
    if (!(attention_mix >= 0.0 && attention_mix <= 1.0)) bad("attention.mix must lie in [0, 1]");
    if (!(filter.d0 > 0.0)) bad("filter.d0 must be > 0");
    if (mode == RunMode::ablate_steps && step_counts.empty()) bad("ablate_steps needs step_counts");
    try {
        auto s_v = make_schedule(t2v_schedule.kind, t2v_schedule.total_steps, t2v_schedule.params);
        auto s_i = make_schedule(t2i_schedule.kind, t2i_schedule.total_steps, t2i_schedule.params);
        if (s_v.total_steps() != s_i.total_steps()) bad("both schedules need the same total_steps");
        if (steps > s_i.total_steps()) bad("steps exceeds total_steps");
        for (int k : step_counts)
            if (k < 1 || k > s_v.total_steps()) bad("step_counts entries must lie in [1, total_steps]");
        make_gp_prior(shape, t2v_prior.rho, t2v_prior.spectrum, t2v_prior.variance_scale).validate();
        make_gp_prior(shape, t2i_prior.rho, t2i_prior.spectrum, t2i_prior.variance_scale).validate();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::invalid_config) throw;
        bad(e.what());
    }
}

json config_to_json(const RunConfig& c) {
    return {
        {"mode", to_string(c.mode)},
        {"seeds", c.seeds},
        {"output_dir", c.output_dir.string()},
        {"shape", {{"frames", c.shape.frames}, {"channels", c.shape.channels}, {"height", c.shape.height},
                   {"width", c.shape.width}}},
        {"priors", {{"t2v", prior_json(c.t2v_prior)}, {"t2i", prior_json(c.t2i_prior)}}},
        {"schedules", {{"t2v", schedule_json(c.t2v_schedule)}, {"t2i", schedule_json(c.t2i_schedule)}}},
        {"plan",
         {{"steps", c.steps},
          {"refine_steps", c.refine_steps},
          {"n_sdedit", c.n_sdedit},
          {"filter", {{"mode", to_string(c.filter.mode)}, {"d0", c.filter.d0}, {"every_refine", c.filter.every_refine}}},
          {"inversion", to_string(c.inversion)},
          {"snr_matched", c.snr_matched},
          {"eta_t2v", c.eta_t2v},
          {"eta_t2i", c.eta_t2i}}},
        {"attention", {{"mix", c.attention_mix}, {"seed", c.attention_seed}}},
        {"step_counts", c.step_counts},
        {"render", c.render},
        {"trace", c.write_trace},
    };
}

RunConfig config_from_json(const json& doc) {
    const json& j = (doc.is_object() && doc.contains("config") && doc.contains("artifacts")) ? doc.at("config") : doc;
    reject_unknown(j, "config", {"mode", "seeds", "output_dir", "shape", "priors", "schedules", "plan", "attention",
                                 "step_counts", "render", "trace"});
    RunConfig c;
    read_enum(j, "mode", c.mode, "config", run_mode_from_string);
    if (j.contains("seeds")) {
        if (j.at("seeds").is_string())
            c.seeds = parse_seed_list(j.at("seeds").get<std::string>());
        else
            read(j, "seeds", c.seeds, "config");
    }
    if (j.contains("output_dir")) {
        std::string dir;
        read(j, "output_dir", dir, "config");
        c.output_dir = dir;
    }
    if (j.contains("shape")) {
        const json& s = j.at("shape");
        reject_unknown(s, "shape", {"frames", "channels", "height", "width"});
        read(s, "frames", c.shape.frames, "shape");
        read(s, "channels", c.shape.channels, "shape");
        read(s, "height", c.shape.height, "shape");
        read(s, "width", c.shape.width, "shape");
    }
    if (j.contains("priors")) {
        const json& p = j.at("priors");
        reject_unknown(p, "priors", {"t2v", "t2i"});
        if (p.contains("t2v")) prior_from(p.at("t2v"), c.t2v_prior, "priors.t2v");
        if (p.contains("t2i")) prior_from(p.at("t2i"), c.t2i_prior, "priors.t2i");
    }
    if (j.contains("schedules")) {
        const json& s = j.at("schedules");
        reject_unknown(s, "schedules", {"t2v", "t2i"});
        if (s.contains("t2v")) schedule_from(s.at("t2v"), c.t2v_schedule, "schedules.t2v");
        if (s.contains("t2i")) schedule_from(s.at("t2i"), c.t2i_schedule, "schedules.t2i");
    }
    if (j.contains("plan")) {
        const json& p = j.at("plan");
        reject_unknown(p, "plan", {"steps", "refine_steps", "n_sdedit", "filter", "inversion", "snr_matched", "eta_t2v",
                                   "eta_t2i"});
        read(p, "steps", c.steps, "plan");
        read(p, "refine_steps", c.refine_steps, "plan");
        read(p, "n_sdedit", c.n_sdedit, "plan");
        if (p.contains("filter")) {
            const json& f = p.at("filter");
            reject_unknown(f, "plan.filter", {"mode", "d0", "every_refine"});
            read_enum(f, "mode", c.filter.mode, "plan.filter", filter_mode_from_string);
            read(f, "d0", c.filter.d0, "plan.filter");
            read(f, "every_refine", c.filter.every_refine, "plan.filter");
        }
        read_enum(p, "inversion", c.inversion, "plan", inversion_strategy_from_string);
        read(p, "snr_matched", c.snr_matched, "plan");
        read(p, "eta_t2v", c.eta_t2v, "plan");
        read(p, "eta_t2i", c.eta_t2i, "plan");
    }
    if (j.contains("attention")) {
        const json& a = j.at("attention");
        reject_unknown(a, "attention", {"mix", "seed"});
        read(a, "mix", c.attention_mix, "attention");
        read(a, "seed", c.attention_seed, "attention");
    }
    read(j, "step_counts", c.step_counts, "config");
    read(j, "render", c.render, "config");
    read(j, "trace", c.write_trace, "config");
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        bad(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    std::vector<std::uint64_t> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        auto dash = item.find('-');
        if (dash == std::string_view::npos) {
            out.push_back(parse_u64(item));
            continue;
        }
        std::uint64_t lo = parse_u64(item.substr(0, dash));
        std::uint64_t hi = parse_u64(item.substr(dash + 1));
        if (hi < lo) bad("empty seed range '" + std::string(item) + "'");
        for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    }
    if (out.empty()) bad("empty seed list");
    return out;
}

}  // namespace elevator
