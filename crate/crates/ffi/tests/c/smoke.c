#include <stdio.h>
#include <math.h>
#include <string.h>
#include "sricci.h"

int main(void) {
  SricciComplex *k = NULL;
  if (sricci_complex_generate("tetrahedron", NULL, 0, &k) != SRICCI_STATUS_OK) return 1;
  size_t dim = 0, n = 0;
  sricci_complex_dim(k, &dim);
  sricci_complex_face_count(k, dim, &n);
  double kappa = 0.0;
  if (sricci_ricci(k, SRICCI_WEIGHTS_DELTA, dim, 0, 1, &kappa) != SRICCI_STATUS_OK) return 2;
  double eig[8];
  size_t len = 0;
  if (sricci_down_spectrum(k, SRICCI_WEIGHTS_DELTA, dim, eig, 8, &len) != SRICCI_STATUS_OK) return 3;
  char *json = NULL;
  if (sricci_report_json(k, "summary", SRICCI_WEIGHTS_DELTA, &json) != SRICCI_STATUS_OK) return 4;
  int has_tool = strstr(json, "\"tool\"") != NULL;
  sricci_string_free(json);
  SricciComplex *bad = NULL;
  SricciStatus s = sricci_complex_from_json("{\"facets\": []}", &bad);
  const char *msg = sricci_last_error_message();
  printf("%zu %zu %.6f %zu %.6f %.6f %d %d %s\n", dim, n, kappa, len, fabs(eig[0]), eig[len - 1], has_tool, (int)s,
         msg ? "msg" : "none");
  sricci_complex_free(k);
  return 0;
}
