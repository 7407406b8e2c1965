#include <stdio.h>
#include <string.h>

#include "convex_chains.h"

#define CHECK(cond)                                             \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                 \
    }                                                           \
  } while (0)

int main(void) {
  cc_count_table *table = NULL;
  CHECK(cc_count_table_new(100, 100, &table) == CC_STATUS_OK);
  char *s = NULL;
  CHECK(cc_count_table_get(table, 100, 100, &s) == CC_STATUS_OK);
  CHECK(strcmp(s, "26878385993387721255010") == 0);
  cc_string_free(s);
  CHECK(cc_count_table_get(table, 0, 101, &s) == CC_STATUS_OUT_OF_RANGE);
  CHECK(cc_last_error() != NULL);
  cc_count_table_free(table);

  double v = 0.0;
  CHECK(cc_log_z(-1.0, 1e-14, &v, NULL) == CC_STATUS_DOMAIN);
  CHECK(cc_log_z(0.5, 1e-14, &v, NULL) == CC_STATUS_OK);
  CHECK(v > 0.0);

  cc_zeros *zeros = NULL;
  CHECK(cc_zeros_new(30.0, &zeros) == CC_STATUS_OK);
  CHECK(cc_zeros_len(zeros) == 3);
  double gamma = 0.0;
  CHECK(cc_zeros_get(zeros, 0, &gamma, NULL, NULL) == CC_STATUS_OK);
  CHECK(gamma > 14.1347 && gamma < 14.1348);
  cc_zeros_free(zeros);

  printf("ok %s\n", cc_version());
  return 0;
}
