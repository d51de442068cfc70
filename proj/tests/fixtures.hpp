#pragma once

#include "pondctl/model.hpp"

// Parameter sets for the bundled pond-management scenarios: a single
// water hyacinth stand, and hyacinth (species 1) competing with water
// lettuce (species 2).

inline pondctl::ModelSpec hyacinth_spec() {
  pondctl::ModelSpec spec;
  spec.n_species = 1;
  spec.a = {0.103};
  spec.b = {0.000147};
  spec.tau = {1.0};
  spec.diffusion = {1.33};
  return spec;
}

inline pondctl::ModelSpec two_plant_spec() {
  pondctl::ModelSpec spec;
  spec.n_species = 2;
  spec.a = {0.061, 0.087};
  spec.b = {0.0000614, 0.00001, 0.0001, 0.0001992};
  spec.tau = {1.0, 1.0};
  spec.diffusion = {1.33, 1.3};
  return spec;
}
