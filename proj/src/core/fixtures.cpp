#include "core/fixtures.hpp"

namespace superkilling {

namespace {

const char* kEuclidean = R"SK(# Euclidean superspace: flat metric on a 1|2 chart.
chart R12 {
  even: t;
  odd: xi1, xi2;
}
metric g on R12 = dt*dt + 2*dxi1*dxi2;
vector Q on R12 (odd) = d_xi1;
check homological(Q);
check killing(g, Q);
check unimodular(g, Q);
)SK";

const char* kHalfSuperline = R"SK(# Positive half-superline: the flat 1|2 metric rescaled by 1/t^2 on t > 0.
# Odd translations remain Killing; the even translation does not.
chart Rplus {
  even: t;
  odd: xi1, xi2;
  box: t in (0.5, 2.5);
}
metric g on Rplus = (dt*dt + 2*dxi1*dxi2) / t^2;
vector Q on Rplus (odd) = d_xi1;
vector T on Rplus (even) = d_t;
check homological(Q);
check killing(g, Q);
check killing(g, T) expect fail;
check unimodular(g, Q);
)SK";

const char* kSuperSphere = R"SK(# Super-sphere patch in angle coordinates with two odd directions.
chart S22 {
  even: theta, phi;
  odd: xi1, xi2;
  box: theta in (0.3, 2.8), phi in (0.1, 3.0);
}
metric g on S22 = dtheta*dtheta + sin(theta)^2*dphi*dphi - 2*dxi1*dxi2;
vector Q on S22 (odd) = d_xi1;
vector F on S22 (even) = d_phi;
check homological(Q);
check killing(g, Q);
check killing(g, F);
check unimodular(g, Q);
)SK";

const char* kPiTmFlat = R"SK(# Odd tangent prototype over the flat plane: coordinates (x, y | th1, th2)
# with th standing for the parity-shifted differentials. The odd field dR
# plays the de Rham vector; its modular representative vanishes for the
# coordinate volume, but no even metric here makes it Killing.
chart PiTM {
  even: x, y;
  odd: th1, th2;
}
metric G on PiTM = dx*dx + dy*dy - 2*dth1*dth2;
vector dR on PiTM (odd) = th1*d_x + th2*d_y;
volume coordvol on PiTM = 1;
check homological(dR);
check modular(coordvol, dR) == 0;
check killing(G, dR) expect fail;
)SK";

const char* kShander = R"SK(# Reduced Killing equation in adapted coordinates: tau-independence of the
# metric components, and the forced vanishing of the tau-tau component.
chart R12s {
  even: t;
  odd: xi1, xi2;
}
metric gs on R12s = dt*dt + 2*dxi1*dxi2;
metric gbad on R12s = (1 + xi1*xi2)*dt*dt + 2*dxi1*dxi2;
check shander(gs, xi1);
check shander(gbad, xi1) expect fail;
)SK";

const char* kMorphisms = R"SK(# Maps between flat 1|2 charts: an even translation is a morphism of the
# full structure, the odd swap is not.
chart A {
  even: t;
  odd: xi1, xi2;
}
chart B {
  even: s;
  odd: eta1, eta2;
}
metric gA on A = dt*dt + 2*dxi1*dxi2;
metric gB on B = ds*ds + 2*deta1*deta2;
vector QA on A (odd) = d_xi1;
vector QB on B (odd) = d_eta1;
change translation from A to B {
  s = t + 1;
  eta1 = xi1;
  eta2 = xi2;
  inverse {
    t = s - 1;
    xi1 = eta1;
    xi2 = eta2;
  }
}
change oddswap from A to B {
  s = t;
  eta1 = xi2;
  eta2 = xi1;
  inverse {
    t = s;
    xi1 = eta2;
    xi2 = eta1;
  }
}
check morphism(gA, QA, gB, QB, translation);
check morphism(gA, QA, gB, QB, oddswap) expect fail;
)SK";

const char* kLieAlgebra = R"SK(# Structure-constant mode. The algebra [e1,e2] = e1 satisfies Jacobi but
# fails both the algebraic Killing condition and the trace condition; the
# abelian algebra passes both.
liealg NonUnimodular2 {
  dim 2;
  bracket [1,2] = e1;
  form [1,2] = 1;
}
liealg Abelian2 {
  dim 2;
  form [1,2] = 1;
}
check liealg_killing(NonUnimodular2) expect fail;
check liealg_trace(NonUnimodular2) expect fail;
check liealg_killing(Abelian2);
check liealg_trace(Abelian2);
)SK";

const char* kLieAlgebraJson = R"SK({
  "dim": 2,
  "structure": [[1, 1, 2, 1]],
  "form": [[1, 2, 1]]
}
)SK";

const std::vector<Fixture> kFixtures = {
    {"euclidean_superspace", "flat 1|2 metric, odd translation field",
     "check", kEuclidean},
    {"half_superline", "1/t^2-scaled flat metric on t > 0", "check",
     kHalfSuperline},
    {"super_sphere", "2|2 sphere patch metric in angles", "check",
     kSuperSphere},
    {"pi_tm_flat", "odd tangent prototype over the flat plane", "check",
     kPiTmFlat},
    {"shander_normal_form", "reduced Killing equation in adapted coordinates",
     "check", kShander},
    {"morphisms", "structure-preserving maps between flat charts", "check",
     kMorphisms},
    {"lie_algebra", "structure constants: Killing and trace conditions",
     "check", kLieAlgebra},
    {"liealg_2d", "JSON input for the 2-dimensional algebra [e1,e2] = e1",
     "liealg", kLieAlgebraJson},
};

}  // namespace

const std::vector<Fixture>& fixtures() { return kFixtures; }

const Fixture* find_fixture(const std::string& name) {
  for (const Fixture& f : kFixtures)
    if (name == f.name) return &f;
  return nullptr;
}

}  // namespace superkilling
