// C API implementation: thin ownership and error-code layer over the
// configuration parser and the command runner.

#include "apqr/apqr.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "config.hpp"
#include "repeater.hpp"
#include "runner.hpp"
#include "tree.hpp"

struct apqr_model {
    apqr::cfg::run_config rc;
};

namespace {

// Returned strings cross the C boundary, so they are malloc-owned and the
// caller releases them with apqr_string_free.
char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void put_string(char** slot, const std::string& s) {
    if (slot)
        *slot = dup_string(s);
}

} // namespace

extern "C" {

const char* apqr_version(void) { return "1.0.0"; }

int apqr_model_create(const char* config_json, apqr_model** out,
                      char** error) {
    if (error)
        *error = nullptr;
    if (!out)
        return APQR_E_CONFIG;
    *out = nullptr;
    try {
        auto rc = apqr::cfg::parse(config_json ? config_json : "");
        *out = new apqr_model{std::move(rc)};
        return APQR_OK;
    } catch (const apqr::cfg::config_error& e) {
        put_string(error, e.what());
        return APQR_E_CONFIG;
    } catch (const std::exception& e) {
        put_string(error, e.what());
        return APQR_E_CONFIG;
    }
}

void apqr_model_destroy(apqr_model* model) { delete model; }

int apqr_model_output(apqr_model* model, char** format_out, char** path_out) {
    if (!model)
        return APQR_E_CONFIG;
    put_string(format_out, model->rc.output.format);
    put_string(path_out, model->rc.output.path);
    return APQR_OK;
}

int apqr_model_run(apqr_model* model, const char* command,
                   const char* overrides_json, char** document_out,
                   char** human_out, char** error) {
    if (error)
        *error = nullptr;
    if (document_out)
        *document_out = nullptr;
    if (human_out)
        *human_out = nullptr;
    if (!model || !command) {
        put_string(error, "model and command must be non-null");
        return APQR_E_CONFIG;
    }
    try {
        apqr::cfg::overrides ov =
            apqr::cfg::parse_overrides(overrides_json ? overrides_json : "");
        apqr::run::outcome res = apqr::run::run(model->rc, command, ov);
        put_string(document_out, res.document);
        put_string(human_out, res.human);
        if (res.code == apqr::run::exit_compute ||
            res.code == apqr::run::exit_config)
            put_string(error, res.human);
        return res.code;
    } catch (const apqr::cfg::config_error& e) {
        put_string(error, e.what());
        return APQR_E_CONFIG;
    } catch (const std::exception& e) {
        put_string(error, e.what());
        return APQR_E_COMPUTE;
    }
}

void apqr_string_free(char* s) { std::free(s); }

long long apqr_tree_qubit_count(const int* branches, int levels) {
    if (levels < 0 || (levels > 0 && !branches))
        return -1;
    try {
        apqr::tree::tree_params t;
        t.branches.reserve(static_cast<size_t>(levels));
        for (int i = 0; i < levels; ++i)
            t.branches.push_back(branches[i]);
        apqr::tree::validate(t);
        return apqr::tree::tree_qubit_count(t);
    } catch (const std::exception&) {
        return -1;
    }
}

double apqr_survival_per_step(double tau_a_s, double c_m_per_s,
                              double att_length_km) {
    try {
        return apqr::model::survival_per_step(tau_a_s, c_m_per_s,
                                              att_length_km);
    } catch (const std::exception&) {
        return -1.0;
    }
}

double apqr_bell_success(double epsilon0) {
    try {
        return apqr::model::bell_success(epsilon0);
    } catch (const std::exception&) {
        return -1.0;
    }
}

int apqr_direct_transmission_cost(double length_km, double source_rate_hz,
                                  double att_length_km, double* photons,
                                  double* seconds) {
    try {
        auto cost = apqr::model::direct_transmission_cost(
            length_km, source_rate_hz, att_length_km);
        if (photons)
            *photons = cost.photons;
        if (seconds)
            *seconds = cost.seconds;
        return APQR_OK;
    } catch (const std::exception&) {
        return APQR_E_COMPUTE;
    }
}

} // extern "C"
