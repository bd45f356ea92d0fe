#!/usr/bin/env python3
"""Regenerates the shipped approximate databases under data/.

Published anchors (part numbers, R_ds(on), I_d@100C, unit prices, fan flows and prices) are
exact; every curve, static pressure and price sample is a synthesized approximation.
"""
import argparse
import pathlib

import numpy as np

HEADER = "# APPROXIMATION: synthesized data, not vendor datasheet values. Regenerate with tools/gen_data.py.\n"

DEVICES = [
    # part_id, r_ds_on, i_d_100c, cost, r_th_jc
    ("IMZA120R007M1H", 7e-3, 168.0, 62.39, 0.21),
    ("IMZA120R014M1H", 14e-3, 89.0, 32.34, 0.38),
    ("AIMZH120R020M1T", 20e-3, 71.0, 29.15, 0.50),
    ("AIMZH120R030M1T", 30e-3, 49.0, 20.62, 0.66),
]
TJ = [25.0, 100.0, 150.0, 175.0]

FANS = [
    # part_id, w, h, depth, flow m3/min, static pressure Pa (approximate), cost
    ("9GA0412P7G001", 0.040, 0.040, 0.015, 0.36, 64.0, 13.33),
    ("9GA0412P3J01", 0.040, 0.040, 0.028, 0.67, 225.0, 14.97),
    ("04028DA-12V-A6-KG", 0.040, 0.040, 0.028, 1.13, 620.0, 20.03),
]


def g(x):
    return f"{x:.6g}"


def switches(args):
    out = [HEADER, "# columns in SI units: ohm, A, USD, K/W, V, degC, J\n\n@table devices\n"]
    out.append("part_id v_rating r_ds_on_ref i_d_100c unit_cost r_th_jc ref_rg ref_tj ref_v "
               "rg_scale_on rg_scale_off rg_scale_rr ktj_on ktj_off ktj_rr t_j_max\n")
    for pid, r, idc, cost, rth in DEVICES:
        out.append(f"{pid} 1200 {g(r)} {g(idc)} {g(cost)} {g(rth)} 2 25 800 1 1 1 "
                   f"{g(args.ktj_on)} {g(args.ktj_off)} {g(args.ktj_rr)} 175\n")

    out.append("\n# channel drop: R(T) * i with R(150C) = 1.6 R(25C); diode: V_f0(T) + R_d(T) * i\n")
    out.append("@table conduction\npart_id kind tj current voltage\n")
    for pid, r, idc, _, _ in DEVICES:
        currents = np.linspace(0.0, 4.0 * idc, 9)
        for tj in TJ:
            rt = r * (1.0 + 0.6 * (tj - 25.0) / 125.0)
            for i in currents:
                out.append(f"{pid} channel {g(tj)} {g(i)} {g(rt * i)}\n")
        for tj in TJ:
            vf0 = args.vf0 - args.vf_tc * (tj - 25.0)
            rd = args.rd_scale * r * (1.0 + 0.3 * (tj - 25.0) / 125.0)
            for i in currents:
                out.append(f"{pid} diode {g(tj)} {g(i)} {g(vf0 + rd * i)}\n")

    out.append("\n# energies at ref_v, ref_tj, ref_rg\n@table switching\npart_id kind current energy\n")
    for pid, r, idc, _, _ in DEVICES:
        size = idc / 168.0
        currents = np.linspace(0.0, 4.0 * idc, 9)
        for kind, a, b in (("on", args.eon_a, args.eon_b), ("off", args.eoff_a, args.eoff_b),
                           ("rr", args.err_a, args.err_b)):
            for i in currents:
                e = a * size * i + b / np.sqrt(size) * i * i
                out.append(f"{pid} {kind} {g(i)} {g(e)}\n")
    return "".join(out)


def fans(_):
    out = [HEADER, "# static pressures are approximate; flows and prices as listed by the vendor\n\n@table fans\n",
           "part_id width_m height_m depth_m max_flow_m3min max_static_pressure_pa unit_cost\n"]
    for f in FANS:
        out.append(" ".join([f[0]] + [g(v) for v in f[1:]]) + "\n")
    return "".join(out)


def heatsinks(args, rng):
    out = [HEADER, "# extruded aluminium profile price samples\n\n@table heatsink_prices\npart_id mass_kg cost_usd\n"]
    for k, m in enumerate([0.05, 0.1, 0.2, 0.35, 0.5, 0.8, 1.2]):
        c = args.hs_usd_per_kg * m * (1.0 + 0.08 * rng.standard_normal())
        out.append(f"HS{k + 1:02d} {g(m)} {c:.2f}\n")
    return "".join(out)


def cores(args, rng):
    out = [HEADER, "\n@table core_material\nname b_sat_t k alpha beta density_kgm3\n",
           "N87 0.39 9.9 1.25 2.35 4850\n",
           "\n# ferrite core set prices\n@table core_prices\npart_id volume_m3 cost_usd\n"]
    for k, v in enumerate([2e-5, 5e-5, 1e-4, 2e-4, 4e-4, 8e-4]):
        c = args.core_usd_per_m3 * v * (1.0 + 0.1 * rng.standard_normal())
        out.append(f"CORE{k + 1:02d} {g(v)} {c:.2f}\n")
    out.append("\n@table winding_material\nname resistivity_20c temp_coefficient\ncopper 1.72e-8 0.00393\n")
    out.append("\n# copper foil cut-length prices\n@table foil_prices\npart_id volume_m3 cost_usd\n")
    for k, v in enumerate([1e-6, 5e-6, 1e-5, 5e-5, 1e-4]):
        c = args.foil_usd_per_m3 * v * (1.0 + 0.1 * rng.standard_normal())
        out.append(f"FOIL{k + 1:02d} {g(v)} {c:.2f}\n")
    return "".join(out)


def capacitors(_, rng):
    out = [HEADER, "# DC-link film capacitor series samples\n\n@table capacitors\n",
           "part_id capacitance_f rated_voltage_v cost_usd esr_ohm\n"]
    k = 0
    for v in (800.0, 1000.0, 1200.0):
        for c_uf in (5, 10, 20, 30, 50, 75, 100):
            c = c_uf * 1e-6
            cost = (3.5e5 * c + 0.006 * v + 2.0) * (1.0 + 0.05 * rng.standard_normal())
            esr = (2e-8 / c + 1e-5 / (c * v) + 1e-3) * (1.0 + 0.05 * rng.standard_normal())
            k += 1
            out.append(f"FC{int(v)}-{c_uf:03d} {g(c)} {g(v)} {cost:.2f} {esr:.4g}\n")
    return "".join(out)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    p.add_argument("--seed", type=int, default=20240301)
    p.add_argument("--vf0", type=float, default=3.0)
    p.add_argument("--vf-tc", type=float, default=0.004)
    p.add_argument("--rd-scale", type=float, default=1.5)
    p.add_argument("--eon-a", type=float, default=4e-6)
    p.add_argument("--eon-b", type=float, default=1.2e-7)
    p.add_argument("--eoff-a", type=float, default=1.5e-6)
    p.add_argument("--eoff-b", type=float, default=3.5e-8)
    p.add_argument("--err-a", type=float, default=0.5e-6)
    p.add_argument("--err-b", type=float, default=5e-9)
    p.add_argument("--ktj-on", type=float, default=0.001)
    p.add_argument("--ktj-off", type=float, default=0.001)
    p.add_argument("--ktj-rr", type=float, default=0.003)
    p.add_argument("--hs-usd-per-kg", type=float, default=40.0)
    p.add_argument("--core-usd-per-m3", type=float, default=1.5e5)
    p.add_argument("--foil-usd-per-m3", type=float, default=2.7e5)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "switches.db").write_text(switches(args))
    (out / "fans.db").write_text(fans(args))
    (out / "heatsinks.db").write_text(heatsinks(args, rng))
    (out / "cores.db").write_text(cores(args, rng))
    (out / "capacitors.db").write_text(capacitors(args, rng))


if __name__ == "__main__":
    main()
