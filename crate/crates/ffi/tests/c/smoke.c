#include <stdio.h>
#include <string.h>

#include "supergeom.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  SgGeometry *g = NULL;
  CHECK(sg_geometry_new(2, 2, &g) == SG_STATUS_EQUAL_BLOCKS);
  CHECK(strstr(sg_last_error_message(), "equal block sizes") != NULL);
  CHECK(sg_geometry_new(2, 1, &g) == SG_STATUS_OK);

  size_t n, m, dim;
  CHECK(sg_geometry_dimensions(g, &n, &m, &dim) == SG_STATUS_OK);
  CHECK(n == 2 && m == 1 && dim == 8);

  SgForm *theta = NULL, *dtheta = NULL, *tt = NULL, *diff = NULL;
  CHECK(sg_form_canonical_theta(g, &theta) == SG_STATUS_OK);
  CHECK(sg_form_exterior_derivative(g, theta, &dtheta) == SG_STATUS_OK);
  CHECK(sg_form_wedge(theta, theta, &tt) == SG_STATUS_OK);

  /* dΘ = Θ∧Θ, compared through the JSON encoding */
  char *a = NULL, *b = NULL;
  CHECK(sg_form_to_json(dtheta, &a) == SG_STATUS_OK);
  CHECK(sg_form_to_json(tt, &b) == SG_STATUS_OK);
  CHECK(strcmp(a, b) == 0);

  size_t degree;
  CHECK(sg_form_degree(dtheta, &degree) == SG_STATUS_OK && degree == 2);
  CHECK(sg_form_exterior_derivative(g, dtheta, &diff) == SG_STATUS_OK);
  bool zero = false;
  CHECK(sg_form_is_zero(diff, &zero) == SG_STATUS_OK && zero);

  bool passed = false;
  CHECK(sg_verify_identities(g, &passed, NULL) == SG_STATUS_OK && passed);

  size_t betti[4];
  CHECK(sg_betti_numbers(g, 3, 4, betti) == SG_STATUS_OK);
  CHECK(betti[0] == 1 && betti[1] == 0 && betti[2] == 0 && betti[3] == 1);
  CHECK(sg_betti_numbers(g, 3, 3, betti) == SG_STATUS_CAP);
  CHECK(sg_form_degree(NULL, &degree) == SG_STATUS_NULL_POINTER);

  sg_string_free(a);
  sg_string_free(b);
  sg_form_free(theta);
  sg_form_free(dtheta);
  sg_form_free(tt);
  sg_form_free(diff);
  sg_geometry_free(g);
  puts("ok");
  return 0;
}
