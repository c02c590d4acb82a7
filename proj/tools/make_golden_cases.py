#!/usr/bin/env python3
"""Regenerate data/golden/cases.jsonl from the reference inputs.

Each case's ground-truth contract is frozen from `pdecheck reconstruct` over
its reference input; prompts, family/tier labels and acceptable kernel
variants live in the table below. Run from the repository root:

    python3 tools/make_golden_cases.py [--bin build/pdecheck]
"""

import argparse
import json
import pathlib
import subprocess

CASES = [
    {
        "id": "thermal_001",
        "family": "thermal",
        "tier": "simple",
        "prompt": "Model steady-state heat conduction through a 2D steel plate "
                  "with thermal conductivity 18 W/m/K. The left face is held at "
                  "400 K and the right face at 300 K; the other faces are "
                  "insulated.",
        "variants": [["HeatConduction", "ADHeatConduction"]],
    },
    {
        "id": "thermal_trans_002",
        "family": "thermal",
        "tier": "medium",
        "prompt": "Model transient heating of a 2D steel block (conductivity 45, "
                  "density 7850, specific heat 470) with a uniform internal heat "
                  "source of 5e4 W/m^3. The left face is fixed at 300 K, the "
                  "right face exchanges heat with 293.15 K ambient air through a "
                  "film coefficient of 25. Start from 300 K everywhere.",
        "variants": [
            ["HeatConductionTimeDerivative", "ADHeatConductionTimeDerivative"],
            ["HeatConduction", "ADHeatConduction"],
            ["HeatSource", "BodyForce", "ADBodyForce"],
        ],
    },
    {
        "id": "steady_heat_003",
        "family": "thermal",
        "tier": "simple",
        "prompt": "Solve the nondimensional steady conduction equation on a unit "
                  "1D bar. Keep the dimensional thermal conductivity of 3.0 "
                  "recorded as a material property. The left end is held at 1.0 "
                  "and the right end is a zero-flux boundary.",
        "variants": [["Diffusion", "ADDiffusion"]],
    },
    {
        "id": "diffusion_004",
        "family": "diffusion",
        "tier": "simple",
        "prompt": "Solve the Laplace equation on the unit square with value 0 on "
                  "the left edge and 1 on the right edge.",
        "variants": [["Diffusion", "ADDiffusion"]],
    },
    {
        "id": "species_trans_005",
        "family": "diffusion",
        "tier": "medium",
        "prompt": "Model transient transport of a species along a 1D channel "
                  "with diffusivity 2e-3 and a uniform production rate of 0.25. "
                  "The inlet concentration oscillates as 0.5*sin(t), the outlet "
                  "is zero-flux, and the initial profile is exp(-x*x).",
        "variants": [
            ["TimeDerivative", "ADTimeDerivative"],
            ["MatDiffusion", "ADMatDiffusion"],
            ["BodyForce", "ADBodyForce", "HeatSource"],
        ],
    },
    {
        "id": "species_sym_006",
        "family": "diffusion",
        "tier": "complex",
        "prompt": "Model two diffusing, decaying species u and v on the unit "
                  "square that feed each other: u is produced from v at rate 0.3 "
                  "and decays at 1.1; v is produced from u at rate 0.2 and "
                  "decays at 0.9. u enters at value 1.0 on the left; v leaves at "
                  "0.5 on the right; the remaining inflow boundaries are held at "
                  "zero. Both start from zero.",
        "variants": [
            ["Diffusion", "ADDiffusion"],
            ["TimeDerivative", "ADTimeDerivative"],
            ["CoupledForce", "ADCoupledForce"],
            ["Reaction", "ADReaction"],
        ],
    },
    {
        "id": "darcy_001",
        "family": "porous_flow",
        "tier": "simple",
        "prompt": "Model steady pressure-driven Darcy flow through a packed "
                  "column with permeability 0.8451e-9 m^2 and fluid viscosity "
                  "7.98e-4 Pa.s. The inlet pressure is 4000 Pa and the outlet is "
                  "at 0 Pa.",
        "variants": [["DarcyFluxPressure", "PorousFlowFullySaturatedDarcyBase"]],
    },
    {
        "id": "porous_coupled_002",
        "family": "porous_flow",
        "tier": "complex",
        "prompt": "Model a saturated poroelastic column: Darcy flow with pore-"
                  "pressure storage, coupled to vertical deformation through an "
                  "effective-stress term with Biot coefficient 0.8. Inject at "
                  "2 MPa along the bottom, drain freely at the top, clamp the "
                  "bottom displacement, and start from 1 MPa pore pressure.",
        "variants": [
            ["PorousFlowFullySaturatedDarcyBase", "DarcyFluxPressure"],
            ["TimeDerivative", "ADTimeDerivative"],
            ["StressDivergenceTensors", "ADStressDivergenceTensors"],
        ],
    },
    {
        "id": "elasticity_001",
        "family": "mechanics",
        "tier": "medium",
        "prompt": "Model static plane-strain elasticity for a 2D steel plate "
                  "(Young's modulus 2.1e11 Pa, Poisson's ratio 0.3) clamped on "
                  "the left edge and pulled by a 1 MPa tensile traction on the "
                  "right edge.",
        "variants": [["StressDivergenceTensors", "ADStressDivergenceTensors"]],
    },
    {
        "id": "elasticity_dyn_002",
        "family": "mechanics",
        "tier": "complex",
        "prompt": "Model the dynamic response of a clamped 2D steel plate "
                  "(Young's modulus 2.1e11, Poisson's ratio 0.3, density 7800) "
                  "to a suddenly applied 5 MPa traction on the right edge. "
                  "Include inertia on both displacement components and start "
                  "from rest.",
        "variants": [
            ["InertialForce", "ADInertialForce"],
            ["StressDivergenceTensors", "ADStressDivergenceTensors"],
        ],
    },
    {
        "id": "phase_field_001",
        "family": "phase_field",
        "tier": "medium",
        "prompt": "Evolve a non-conserved order parameter by Allen-Cahn "
                  "dynamics on a 2D domain that is periodic in x, with mobility "
                  "1.0 and gradient energy coefficient 0.5. Start from a smooth "
                  "step interface at x = 0.5.",
        "variants": [
            ["AllenCahn", "ADAllenCahn"],
            ["TimeDerivative", "ADTimeDerivative"],
        ],
    },
    {
        "id": "phase_field_002",
        "family": "phase_field",
        "tier": "complex",
        "prompt": "Simulate spinodal decomposition of a conserved concentration "
                  "field by Cahn-Hilliard dynamics on a doubly periodic 2D "
                  "domain with mobility 1.0 and interface coefficient 0.01. "
                  "Seed the field with random values between 0.44 and 0.56.",
        "variants": [["TimeDerivative", "ADTimeDerivative"]],
    },
    {
        "id": "ns_001",
        "family": "navier_stokes",
        "tier": "complex",
        "prompt": "Set up the steady incompressible lid-driven cavity: momentum "
                  "balance with viscous and pressure terms on the velocity, mass "
                  "conservation on the pressure, density 1.0 and viscosity 0.01. "
                  "The lid moves at unit speed, the other walls are no-slip, and "
                  "the pressure is pinned at the left wall.",
        "variants": [["INSADMass", "INSMass"]],
    },
    {
        "id": "em_001",
        "family": "electromagnetics",
        "tier": "medium",
        "prompt": "Model a time-harmonic electric field in a 2D lossy cavity: "
                  "curl-curl operator plus an absorption term with coefficient "
                  "1.2. Drive the left boundary at unit amplitude and terminate "
                  "the right boundary with a first-order absorbing condition of "
                  "strength 2.0.",
        "variants": [["CoefReaction", "ADCoefReaction"]],
    },
    {
        "id": "framework_009",
        "family": "coupled",
        "tier": "medium",
        "prompt": "Model two coupled fields on a 1D bar: v diffuses, decays at "
                  "rate 0.5, enters at 10 on the left and is held at 0 on the "
                  "right; u diffuses and is produced from v with coefficient "
                  "0.5, is held at 0 on the left and has zero flux on the "
                  "right. Both evolve in time from their boundary-consistent "
                  "initial states (u from 0, v from 10).",
        "variants": [
            ["Diffusion", "ADDiffusion"],
            ["TimeDerivative", "ADTimeDerivative"],
            ["CoupledForce", "ADCoupledForce"],
            ["Reaction", "ADReaction"],
        ],
    },
]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--bin", default="build/pdecheck")
    ap.add_argument("--root", default=".", type=pathlib.Path)
    args = ap.parse_args()

    inputs = args.root / "data" / "golden" / "inputs"
    out_path = args.root / "data" / "golden" / "cases.jsonl"

    lines = []
    for meta in CASES:
        input_path = inputs / f"{meta['id']}.i"
        text = input_path.read_text()
        contract = json.loads(
            subprocess.run(
                [args.bin, "reconstruct", str(input_path)],
                check=True, capture_output=True, text=True,
            ).stdout
        )
        lines.append(json.dumps({
            "id": meta["id"],
            "prompt": meta["prompt"],
            "family": meta["family"],
            "tier": meta["tier"],
            "gt_contract": contract,
            "acceptable_kernel_variants": meta["variants"],
            "reference_input": text,
        }))

    out_path.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} cases to {out_path}")


if __name__ == "__main__":
    main()
