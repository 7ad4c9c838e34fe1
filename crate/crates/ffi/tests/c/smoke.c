#include <math.h>
#include <stdio.h>
#include "so3braid.h"

#define CHECK(cond)                                          \
  do {                                                       \
    if (!(cond)) {                                           \
      fprintf(stderr, "line %d: %s\n", __LINE__, #cond);     \
      return 1;                                              \
    }                                                        \
  } while (0)

int main(void) {
  So3bWord *w = NULL;
  CHECK(so3b_word_parse(3, "1 1 1 1", &w) == SO3B_STATUS_OK);
  So3bSphereClass c;
  CHECK(so3b_word_sphere_class(w, &c) == SO3B_STATUS_OK);
  CHECK(c.perm[0] == 1 && c.perm[1] == 2 && c.perm[2] == 3 && c.esum_mod4 == 0);
  so3b_word_free(w);

  CHECK(so3b_word_parse(3, "1 9", &w) == SO3B_STATUS_INVALID_INPUT);
  CHECK(so3b_last_error() != NULL);

  double axis[3] = {0.0, 0.0, 1.0};
  double angle = 2.0 * M_PI;
  So3bPath *p = NULL;
  CHECK(so3b_path_from_segments(axis, &angle, 1, &p) == SO3B_STATUS_OK);
  So3bReport r;
  CHECK(so3b_path_classify(p, &r) == SO3B_STATUS_OK);
  CHECK(r.homotopy_class == 1 && r.agreement);
  so3b_path_free(p);
  printf("ok %s\n", so3b_version());
  return 0;
}
