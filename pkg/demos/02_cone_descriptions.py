"""Three routes to the same cone: closed form, vertex enumeration, elimination."""

import time

import numpy as np

from contact_cwc import ContactPatch, cwc_span, face_form, span_to_face
from contact_cwc.polytope import matches_closed_form, project_wrench_cone

patch = ContactPatch(X=0.1, Y=0.05, mu=0.5)

closed = face_form(patch)
print(len(closed), "closed-form rows")

span = cwc_span(patch)
print(len(span), "span rays, one per corner and pyramid edge")

t = time.perf_counter()
facets = span_to_face(span).normalized()
print(len(facets), "facets from double description in", f"{time.perf_counter() - t:.2f} s")
gap = max(np.abs(closed.rows - row).sum(axis=1).min() for row in facets.A)
print("largest distance from a facet to its closed-form row:", f"{gap:.1e}")

t = time.perf_counter()
exact = project_wrench_cone(patch, exact=True)
print(len(exact), "rows from exact elimination in", f"{time.perf_counter() - t:.2f} s,",
      "MATCH" if matches_closed_form(exact, patch) else "MISMATCH")
