#pragma once

// Shared test fixtures. kDarcyInput is the canonical single-variable porous
// flow input used across parser, reconstruction and fact-extraction tests.

namespace fixtures {

inline constexpr const char* kDarcyInput = R"([Kernels]
  [./diff]
    type = DarcyFluxPressure
    variable = pressure
  [../]
[]

[BCs]
  [./left_bc]
    type = DirichletBC
    variable = pressure
    boundary = left
    value = 1.0e6
  [../]
  [./right_bc]
    type = DirichletBC
    variable = pressure
    boundary = right
    value = 0.0
  [../]
[]

[Materials]
  [./porous]
    type = GenericConstantMaterial
    prop_names = 'permeability viscosity'
    prop_values = '1e-12 1e-3'
  [../]
[]
)";

// Minimal two-equation coupled system: v diffuses and decays, u diffuses and
// is produced from v. Mirrors data/golden/inputs/framework_009.i.
inline constexpr const char* kCoupledInput = R"([Mesh]
  type = GeneratedMesh
  dim = 1
  nx = 100
[]

[Variables]
  [./u]
  [../]
  [./v]
  [../]
[]

[Kernels]
  [./u_diff]
    type = Diffusion
    variable = u
  [../]
  [./u_dt]
    type = TimeDerivative
    variable = u
  [../]
  [./u_src]
    type = CoupledForce
    variable = u
    v = v
    coef = 0.5
  [../]
  [./v_diff]
    type = Diffusion
    variable = v
  [../]
  [./v_dt]
    type = TimeDerivative
    variable = v
  [../]
  [./v_decay]
    type = Reaction
    variable = v
    rate = 0.5
  [../]
[]

[BCs]
  [./u_left]
    type = DirichletBC
    variable = u
    boundary = left
    value = 0
  [../]
  [./u_right]
    type = NeumannBC
    variable = u
    boundary = right
    value = 0
  [../]
  [./v_left]
    type = DirichletBC
    variable = v
    boundary = left
    value = 10
  [../]
  [./v_right]
    type = DirichletBC
    variable = v
    boundary = right
    value = 0
  [../]
[]

[ICs]
  [./u_ic]
    type = ConstantIC
    variable = u
    value = 0
  [../]
  [./v_ic]
    type = ConstantIC
    variable = v
    value = 10
  [../]
[]

[Executioner]
  type = Transient
  dt = 0.05
  end_time = 3
[]
)";

} // namespace fixtures
