#include "kreg/kreg.h"

#include <exception>
#include <new>
#include <string>

#include "kreg/config.hpp"
#include "kreg/errors.hpp"
#include "kreg/kernel.hpp"
#include "kreg/runner.hpp"

struct kreg_config {
  kreg::ConfigParse parse;
  std::string canonical;
  std::string mode;
};

struct kreg_report {
  kreg::RunReport report;
  std::string json;
};

struct kreg_kernel {
  kreg::Kernel kernel;
};

namespace {

thread_local std::string last_error;

kreg_status fail(kreg_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename F>
kreg_status guarded(F&& f) {
  try {
    return f();
  } catch (const kreg::NumericalError& e) {
    return fail(KREG_NUMERICAL_FAILURE, e.what());
  } catch (const kreg::Error& e) {
    return fail(KREG_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(KREG_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(KREG_INTERNAL_ERROR, e.what());
  }
}

}  // namespace

extern "C" {

const char* kreg_version(void) { return kreg::kVersion; }

const char* kreg_last_error(void) { return last_error.c_str(); }

kreg_status kreg_config_parse(const char* text, kreg_config** out) {
  if (out == nullptr) return fail(KREG_INVALID_ARGUMENT, "out is NULL");
  *out = nullptr;
  if (text == nullptr) return fail(KREG_INVALID_ARGUMENT, "text is NULL");
  return guarded([&] {
    auto* handle = new kreg_config{kreg::validate_config(std::string(text)), {}};
    *out = handle;
    if (!handle->parse.ok()) {
      const auto& e = handle->parse.errors.front();
      return fail(KREG_CONFIG_ERROR, (e.path.empty() ? "" : e.path + ": ") + e.message);
    }
    handle->canonical = kreg::to_json(*handle->parse.config).dump(2);
    handle->mode = kreg::to_string(handle->parse.config->mode);
    return KREG_OK;
  });
}

void kreg_config_free(kreg_config* config) { delete config; }

size_t kreg_config_error_count(const kreg_config* config) {
  return config == nullptr ? 0 : config->parse.errors.size();
}

const char* kreg_config_error_path(const kreg_config* config, size_t i) {
  if (config == nullptr || i >= config->parse.errors.size()) return nullptr;
  return config->parse.errors[i].path.c_str();
}

const char* kreg_config_error_message(const kreg_config* config, size_t i) {
  if (config == nullptr || i >= config->parse.errors.size()) return nullptr;
  return config->parse.errors[i].message.c_str();
}

kreg_status kreg_config_set_seed(kreg_config* config, uint64_t seed) {
  if (config == nullptr || !config->parse.ok()) return fail(KREG_INVALID_ARGUMENT, "configuration is not valid");
  config->parse.config->seed = seed;
  config->canonical = kreg::to_json(*config->parse.config).dump(2);
  return KREG_OK;
}

const char* kreg_config_json(const kreg_config* config) {
  if (config == nullptr || !config->parse.ok()) return nullptr;
  return config->canonical.c_str();
}

const char* kreg_config_mode(const kreg_config* config) {
  if (config == nullptr || !config->parse.ok()) return nullptr;
  return config->mode.c_str();
}

const char* kreg_config_output_json(const kreg_config* config) {
  if (config == nullptr || !config->parse.ok()) return nullptr;
  return config->parse.config->output_json.c_str();
}

const char* kreg_config_output_csv(const kreg_config* config) {
  if (config == nullptr || !config->parse.ok()) return nullptr;
  return config->parse.config->output_csv.c_str();
}

kreg_status kreg_run(const kreg_config* config, kreg_report** out) {
  if (out == nullptr) return fail(KREG_INVALID_ARGUMENT, "out is NULL");
  *out = nullptr;
  if (config == nullptr) return fail(KREG_INVALID_ARGUMENT, "config is NULL");
  return guarded([&] {
    kreg::RunReport report =
        config->parse.ok() ? kreg::run(*config->parse.config) : kreg::config_error_report(config->parse.errors);
    auto* handle = new kreg_report{std::move(report), {}};
    handle->json = handle->report.json_text();
    *out = handle;
    const auto status = static_cast<kreg_status>(handle->report.exit_code());
    if (status != KREG_OK) {
      const auto& d = handle->report.document;
      std::string message = kreg::to_string(handle->report.status);
      if (d.contains("error") && d["error"].contains("message")) message += ": " + d["error"]["message"].get<std::string>();
      return fail(status, message);
    }
    return KREG_OK;
  });
}

void kreg_report_free(kreg_report* report) { delete report; }

const char* kreg_report_json(const kreg_report* report) { return report == nullptr ? nullptr : report->json.c_str(); }

const char* kreg_report_csv(const kreg_report* report) {
  return report == nullptr ? nullptr : report->report.csv.c_str();
}

int kreg_report_all_passed(const kreg_report* report) { return report != nullptr && report->report.all_passed; }

int kreg_report_exit_code(const kreg_report* report) {
  return report == nullptr ? KREG_INVALID_ARGUMENT : report->report.exit_code();
}

kreg_status kreg_kernel_create(const char* family, int input_dim, double param, int degree, kreg_kernel** out) {
  if (out == nullptr || family == nullptr) return fail(KREG_INVALID_ARGUMENT, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    const std::string f(family);
    if (input_dim < 1) return fail(KREG_INVALID_ARGUMENT, "input_dim must be positive");
    if (f == "gaussian") {
      *out = new kreg_kernel{kreg::Kernel::gaussian(input_dim, param)};
    } else if (f == "polynomial") {
      *out = new kreg_kernel{kreg::Kernel::polynomial(input_dim, degree, param)};
    } else if (f == "linear") {
      *out = new kreg_kernel{kreg::Kernel::linear(input_dim)};
    } else {
      return fail(KREG_INVALID_ARGUMENT, "unknown kernel family '" + f + "'");
    }
    return KREG_OK;
  });
}

void kreg_kernel_free(kreg_kernel* kernel) { delete kernel; }

kreg_status kreg_kernel_eval(const kreg_kernel* kernel, const double* x, const double* y, double* out) {
  if (kernel == nullptr || x == nullptr || y == nullptr || out == nullptr) {
    return fail(KREG_INVALID_ARGUMENT, "NULL argument");
  }
  return guarded([&] {
    const int d = kernel->kernel.input_dim();
    *out = kernel->kernel(Eigen::Map<const Eigen::VectorXd>(x, d), Eigen::Map<const Eigen::VectorXd>(y, d));
    return KREG_OK;
  });
}

}  // extern "C"
