/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "kreg/kreg.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static char* slurp(const char* dir, const char* name) {
  char path[1024];
  snprintf(path, sizeof path, "%s/%s", dir, name);
  FILE* f = fopen(path, "rb");
  if (!f) return NULL;
  fseek(f, 0, SEEK_END);
  long size = ftell(f);
  fseek(f, 0, SEEK_SET);
  char* text = malloc((size_t)size + 1);
  size_t got = fread(text, 1, (size_t)size, f);
  text[got] = '\0';
  fclose(f);
  return text;
}

static void test_solve(const char* dir) {
  char* text = slurp(dir, "solve_rls.json");
  EXPECT(text != NULL);
  if (!text) return;
  kreg_config* config = NULL;
  EXPECT(kreg_config_parse(text, &config) == KREG_OK);
  free(text);
  EXPECT(kreg_config_error_count(config) == 0);
  EXPECT(strcmp(kreg_config_mode(config), "solve") == 0);
  EXPECT(strcmp(kreg_config_output_json(config), "") == 0);
  EXPECT(strstr(kreg_config_json(config), "\"seed\"") != NULL);
  EXPECT(kreg_config_set_seed(config, 11) == KREG_OK);

  kreg_report* report = NULL;
  EXPECT(kreg_run(config, &report) == KREG_OK);
  EXPECT(report != NULL);
  EXPECT(kreg_report_exit_code(report) == 0);
  EXPECT(kreg_report_all_passed(report) == 1);
  EXPECT(strstr(kreg_report_json(report), "\"coefficients\"") != NULL);
  EXPECT(strstr(kreg_report_json(report), "\"seed\": 11") != NULL);
  EXPECT(strncmp(kreg_report_csv(report), "probe,index", 11) == 0);
  kreg_report_free(report);
  kreg_config_free(config);
}

static void test_config_errors(const char* dir) {
  char* text = slurp(dir, "invalid.json");
  EXPECT(text != NULL);
  if (!text) return;
  kreg_config* config = NULL;
  EXPECT(kreg_config_parse(text, &config) == KREG_CONFIG_ERROR);
  free(text);
  EXPECT(config != NULL);
  size_t n = kreg_config_error_count(config);
  EXPECT(n >= 3);
  int width = 0;
  for (size_t i = 0; i < n; ++i) {
    if (strcmp(kreg_config_error_path(config, i), "kernel.width") == 0) width = 1;
    EXPECT(strlen(kreg_config_error_message(config, i)) > 0);
  }
  EXPECT(width);
  EXPECT(kreg_config_error_path(config, n) == NULL);
  EXPECT(kreg_config_mode(config) == NULL);
  kreg_report* report = NULL;
  EXPECT(kreg_run(config, &report) == KREG_CONFIG_ERROR);
  kreg_report_free(report);
  kreg_config_free(config);
}

static void test_kernel(void) {
  kreg_kernel* k = NULL;
  EXPECT(kreg_kernel_create("gaussian", 2, 1.0, 0, &k) == KREG_OK);
  double x[2] = {0.0, 0.0};
  double y[2] = {1.0, 1.0};
  double value = 0.0;
  EXPECT(kreg_kernel_eval(k, x, y, &value) == KREG_OK);
  EXPECT(fabs(value - exp(-1.0)) < 1e-15);
  kreg_kernel_free(k);

  EXPECT(kreg_kernel_create("polynomial", 2, 1.0, 2, &k) == KREG_OK);
  EXPECT(kreg_kernel_eval(k, y, y, &value) == KREG_OK);
  EXPECT(value == 9.0);
  kreg_kernel_free(k);

  k = NULL;
  EXPECT(kreg_kernel_create("gaussian", 2, -1.0, 0, &k) == KREG_INVALID_ARGUMENT);
  EXPECT(k == NULL);
  EXPECT(strlen(kreg_last_error()) > 0);
  EXPECT(kreg_kernel_create("cubic", 2, 1.0, 0, &k) == KREG_INVALID_ARGUMENT);
}

static void test_null_handling(void) {
  kreg_config* config = NULL;
  EXPECT(kreg_config_parse(NULL, &config) == KREG_INVALID_ARGUMENT);
  EXPECT(kreg_config_parse("{}", NULL) == KREG_INVALID_ARGUMENT);
  EXPECT(kreg_run(NULL, NULL) == KREG_INVALID_ARGUMENT);
  EXPECT(kreg_kernel_eval(NULL, NULL, NULL, NULL) == KREG_INVALID_ARGUMENT);
  EXPECT(kreg_config_error_count(NULL) == 0);
  EXPECT(kreg_report_json(NULL) == NULL);
  kreg_config_free(NULL);
  kreg_report_free(NULL);
  kreg_kernel_free(NULL);
  EXPECT(strcmp(kreg_version(), "0.1.0") == 0);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: test_c_api DATA_DIR\n");
    return 2;
  }
  test_solve(argv[1]);
  test_config_errors(argv[1]);
  test_kernel();
  test_null_handling();
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("all C API checks passed\n");
  return failures ? 1 : 0;
}
