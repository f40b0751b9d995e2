#!/usr/bin/env python3
"""Deterministically synthesize the bundled country-level case snapshot.

The dataset covers 2020-01-22 through 2020-07-21 (182 days) for 207
countries. Curve shapes, sizes, and reporting quirks (gaps, revisions,
sparse reporting, missing optional columns) are drawn from fixed per-country
generators seeded off one master seed, so the output file is reproducible
byte for byte.

Usage:
    python3 tools/generate_snapshot.py --out src/casecast/data/snapshot_2020.csv
    python3 tools/generate_snapshot.py --check          # validate cohorts
    python3 tools/generate_snapshot.py --check --full   # + end-to-end forecasts
"""

from __future__ import annotations

import argparse
import csv
import sys
from datetime import date, timedelta

import numpy as np

SEED = 20200722
START = date(2020, 1, 22)
N_DAYS = 182

# Peak value law: pv = PV_COEF * pop**PV_POWER + PV_DENS * density + tier noise.
PV_COEF = 3.8e-3
PV_POWER = 0.80
PV_DENS = 0.3
PV_FLOOR = 400.0
NOISE_SD = {1: 450.0, 2: 1500.0, 3: 1300.0}

# Attack-rate law (cases per million), drawn independently of the peak so the
# two carry separate information: cpm = CPM_COEF * pop**-0.2 * lognormal.
CPM_COEF = 2.6e5
CPM_LSD = 0.28

# Peak day law (days after the first case).
PD_BASE = 58.0
PD_SLOPE = 1.45e-7
PD_SD = 3.0

WIDTH_MIN, WIDTH_MAX = 35.0, 75.0
WEEKLY_AMP = 0.12
ROOT2PI_HALF = 1.2533141373155003  # sqrt(pi/2)

# (name, continent, population, density, profile, params)
# Profiles: bump (converged outbreak; tier sets noise), pinned (converged,
# cases-per-million and peak fixed), rising, two_wave, sigmoid (all still
# growing at the cutoff), plateau (peaked but not fallen), tiny (low attack
# rate), zero (no reported cases), late (first report near the cutoff),
# auto (small country, generator picks a shape).
COUNTRIES = [
    ("China", "Asia", 1439323776, 153, "pinned", {"f": 0, "cpm": 59.0, "pv": 4200.0, "pd": 25.0}),
    ("India", "Asia", 1380004385, 464, "rising", {"f": 8, "peak_tau": 248, "sigma": 50.0, "pv": 120000.0}),
    ("US", "North America", 331002651, 36, "two_wave", {"f": 0}),
    ("Indonesia", "Asia", 273523615, 151, "rising", {"f": 40, "cpm": 330.0}),
    ("Pakistan", "Asia", 220892340, 287, "bump", {"f": 35, "tier": 1}),
    ("Brazil", "South America", 212559417, 25, "sigmoid", {"f": 33}),
    ("Nigeria", "Africa", 206139589, 226, "tiny", {"f": 37, "cpm": 60.0}),
    ("Bangladesh", "Asia", 164689383, 1265, "rising", {"f": 47, "cpm": 1300.0}),
    ("Russia", "Europe", 145934462, 9, "bump", {"f": 9, "tier": 1}),
    ("Mexico", "North America", 128932753, 66, "rising", {"f": 37, "cpm": 2800.0}),
    ("Japan", "Asia", 126476461, 347, "rising", {"f": 0, "cpm": 210.0}),
    ("Ethiopia", "Africa", 114963588, 115, "tiny", {"f": 52, "cpm": 75.0}),
    ("Philippines", "Asia", 109581078, 368, "rising", {"f": 8, "cpm": 650.0}),
    ("Egypt", "Africa", 102334404, 103, "plateau", {"f": 23, "cpm": 880.0}),
    ("Vietnam", "Asia", 97338579, 314, "tiny", {"f": 1, "cpm": 4.0}),
    ("Democratic Republic of Congo", "Africa", 89561403, 40, "tiny", {"f": 49, "cpm": 95.0}),
    ("Turkey", "Asia", 84339067, 110, "bump", {"f": 49, "tier": 1}),
    ("Iran", "Asia", 83992949, 52, "bump", {"f": 28, "tier": 1}),
    ("Germany", "Europe", 83783942, 240, "bump", {"f": 5, "tier": 1}),
    ("Thailand", "Asia", 69799978, 137, "tiny", {"f": 0, "cpm": 47.0}),
    ("United Kingdom", "Europe", 67886011, 281, "bump", {"f": 9, "tier": 1, "no_recovered": True}),
    ("France", "Europe", 65273511, 119, "bump", {"f": 2, "tier": 1, "dips": [(126, 0.02)]}),
    ("Italy", "Europe", 60461826, 206, "bump", {"f": 9, "tier": 1}),
    ("Tanzania", "Africa", 59734218, 67, "tiny", {"f": 55, "cpm": 9.0, "sparse": 4}),
    ("South Africa", "Africa", 59308690, 49, "rising", {"f": 44, "cpm": 7000.0}),
    ("Myanmar", "Asia", 54409800, 83, "tiny", {"f": 62, "cpm": 6.0}),
    ("Kenya", "Africa", 53771296, 94, "rising", {"f": 52, "cpm": 290.0}),
    ("South Korea", "Asia", 51269185, 527, "pinned", {"f": 0, "cpm": 270.0, "pv": 240.0}),
    ("Colombia", "South America", 50882891, 46, "rising", {"f": 45, "cpm": 4300.0}),
    ("Spain", "Europe", 46754778, 94, "bump", {"f": 10, "tier": 1, "gaps": [155, 156, 157]}),
    ("Uganda", "Africa", 45741007, 229, "tiny", {"f": 60, "cpm": 24.0}),
    ("Argentina", "South America", 45195774, 17, "rising", {"f": 42, "cpm": 3000.0}),
    ("Algeria", "Africa", 43851044, 18, "rising", {"f": 34, "cpm": 580.0}),
    ("Sudan", "Africa", 43849260, 25, "tiny", {"f": 52, "cpm": 85.0}),
    ("Ukraine", "Europe", 43733762, 75, "rising", {"f": 42, "cpm": 1400.0}),
    ("Iraq", "Asia", 40222493, 93, "rising", {"f": 33, "cpm": 2400.0}),
    ("Afghanistan", "Asia", 38928346, 60, "plateau", {"f": 33, "cpm": 910.0}),
    ("Poland", "Europe", 37846611, 124, "plateau", {"f": 43, "cpm": 1070.0}),
    ("Canada", "North America", 37742154, 4, "bump", {"f": 4, "tier": 1}),
    ("Morocco", "Africa", 36910560, 83, "rising", {"f": 40, "cpm": 480.0}),
    ("Saudi Arabia", "Asia", 34813871, 16, "bump", {"f": 41, "tier": 1}),
    ("Uzbekistan", "Asia", 33469203, 79, "rising", {"f": 54, "cpm": 530.0}),
    ("Peru", "South America", 32971854, 26, "bump", {"f": 45, "tier": 1, "pv_offset": 1800.0}),
    ("Angola", "Africa", 32866272, 26, "tiny", {"f": 59, "cpm": 28.0}),
    ("Malaysia", "Asia", 32365999, 99, "pinned", {"f": 3, "cpm": 270.0, "pv": 150.0}),
    ("Mozambique", "Africa", 31255435, 40, "tiny", {"f": 61, "cpm": 45.0}),
    ("Ghana", "Africa", 31072940, 137, "plateau", {"f": 52, "cpm": 900.0}),
    ("Yemen", "Asia", 29825964, 57, "tiny", {"f": 79, "cpm": 55.0, "sparse": 3}),
    ("Nepal", "Asia", 29136808, 203, "rising", {"f": 2, "cpm": 610.0}),
    ("Venezuela", "South America", 28435940, 32, "rising", {"f": 52, "cpm": 400.0}),
    ("Madagascar", "Africa", 27691018, 47, "rising", {"f": 58, "cpm": 240.0}),
    ("Cameroon", "Africa", 26545863, 56, "plateau", {"f": 45, "cpm": 620.0}),
    ("Cote d'Ivoire", "Africa", 26378274, 83, "rising", {"f": 49, "cpm": 530.0}),
    ("North Korea", "Asia", 25778816, 214, "zero", {}),
    ("Australia", "Oceania", 25499884, 3, "rising", {"f": 3, "cpm": 520.0}),
    ("Niger", "Africa", 24206644, 19, "tiny", {"f": 58, "cpm": 46.0}),
    ("Taiwan", "Asia", 23816775, 673, "tiny", {"f": 0, "cpm": 19.0}),
    ("Sri Lanka", "Asia", 21413249, 341, "tiny", {"f": 5, "cpm": 88.0}),
    ("Burkina Faso", "Africa", 20903273, 76, "tiny", {"f": 48, "cpm": 50.0}),
    ("Mali", "Africa", 20250833, 17, "tiny", {"f": 64, "cpm": 90.0}),
    ("Romania", "Europe", 19237691, 84, "rising", {"f": 35, "cpm": 2100.0}),
    ("Malawi", "Africa", 19129952, 203, "tiny", {"f": 71, "cpm": 65.0}),
    ("Chile", "South America", 19116201, 26, "bump", {"f": 42, "tier": 2, "pv_offset": 2600.0}),
    ("Kazakhstan", "Asia", 18776707, 7, "rising", {"f": 52, "cpm": 3900.0}),
    ("Zambia", "Africa", 18383955, 25, "tiny", {"f": 57, "cpm": 95.0}),
    ("Guatemala", "North America", 17915568, 167, "rising", {"f": 53, "cpm": 2100.0}),
    ("Ecuador", "South America", 17643054, 71, "bump", {"f": 38, "tier": 2, "pv_offset": -700.0, "dips": [(150, 0.02)]}),
    ("Syria", "Asia", 17500658, 95, "tiny", {"f": 61, "cpm": 30.0}),
    ("Netherlands", "Europe", 17134872, 508, "bump", {"f": 36, "tier": 2, "no_recovered": True}),
    ("Senegal", "Africa", 16743927, 87, "rising", {"f": 40, "cpm": 540.0}),
    ("Cambodia", "Asia", 16718965, 95, "tiny", {"f": 5, "cpm": 10.0}),
    ("Chad", "Africa", 16425864, 13, "tiny", {"f": 58, "cpm": 55.0, "sparse": 3}),
    ("Somalia", "Africa", 15893222, 25, "tiny", {"f": 55, "cpm": 95.0}),
    ("Zimbabwe", "Africa", 14862924, 38, "tiny", {"f": 59, "cpm": 90.0}),
    ("Guinea", "Africa", 13132795, 53, "rising", {"f": 52, "cpm": 510.0}),
    ("Rwanda", "Africa", 12952218, 525, "tiny", {"f": 53, "cpm": 95.0}),
    ("Benin", "Africa", 12123200, 108, "tiny", {"f": 55, "cpm": 95.0}),
    ("Burundi", "Africa", 11890784, 463, "tiny", {"f": 70, "cpm": 27.0}),
    ("Tunisia", "Africa", 11818619, 76, "tiny", {"f": 41, "cpm": 95.0}),
    ("Bolivia", "South America", 11673021, 11, "bump", {"f": 49, "tier": 2}),
    ("Belgium", "Europe", 11589623, 383, "bump", {"f": 12, "tier": 2, "pv_offset": 900.0}),
    ("Haiti", "North America", 11402528, 414, "rising", {"f": 58, "cpm": 620.0}),
    ("Cuba", "North America", 11326616, 110, "pinned", {"f": 50, "cpm": 218.0, "pv": 48.0}),
    ("South Sudan", "Africa", 11193725, 18, "tiny", {"f": 74, "cpm": 90.0}),
    ("Dominican Republic", "North America", 10847910, 225, "bump", {"f": 39, "tier": 2}),
    ("Czechia", "Europe", 10708981, 139, "plateau", {"f": 40, "cpm": 1300.0}),
    ("Greece", "Europe", 10423054, 81, "pinned", {"f": 36, "cpm": 390.0, "pv": 85.0}),
    ("Jordan", "Asia", 10203134, 115, "pinned", {"f": 41, "cpm": 115.0, "pv": 25.0}),
    ("Portugal", "Europe", 10196709, 111, "bump", {"f": 41, "tier": 2}),
    ("Azerbaijan", "Asia", 10139177, 123, "rising", {"f": 38, "cpm": 2700.0}),
    ("Sweden", "Europe", 10099265, 25, "bump", {"f": 10, "tier": 2, "gaps": [120, 140, 160], "no_recovered": True}),
    ("Honduras", "North America", 9904607, 89, "bump", {"f": 50, "tier": 3}),
    ("United Arab Emirates", "Asia", 9890402, 118, "bump", {"f": 7, "tier": 3}),
    ("Hungary", "Europe", 9660351, 107, "bump", {"f": 43, "tier": 3}),
    ("Tajikistan", "Asia", 9537645, 68, "bump", {"f": 99, "tier": 3}),
    ("Belarus", "Europe", 9449323, 47, "bump", {"f": 37, "tier": 3, "pv_offset": 1200.0}),
    ("Austria", "Europe", 9006398, 109, "bump", {"f": 34, "tier": 3}),
    ("Papua New Guinea", "Oceania", 8947024, 20, "tiny", {"f": 59, "cpm": 7.0}),
    ("Serbia", "Europe", 8737371, 100, "bump", {"f": 45, "tier": 3, "pv_offset": -700.0}),
    ("Israel", "Asia", 8655535, 400, "bump", {"f": 30, "tier": 3, "pv_offset": 1500.0}),
    ("Switzerland", "Europe", 8654622, 219, "bump", {"f": 34, "tier": 3}),
    ("Togo", "Africa", 8278724, 152, "tiny", {"f": 45, "cpm": 87.0}),
    ("Sierra Leone", "Africa", 7976983, 111, "tiny", {"f": 70, "cpm": 95.0}),
    ("Hong Kong", "Asia", 7496981, 7140, "rising", {"f": 1, "cpm": 260.0}),
    ("Laos", "Asia", 7275560, 32, "tiny", {"f": 62, "cpm": 3.0}),
    ("Paraguay", "South America", 7132538, 18, "bump", {"f": 46, "tier": 3}),
    ("Bulgaria", "Europe", 6948445, 64, "bump", {"f": 46, "tier": 3}),
    ("Libya", "Africa", 6871292, 4, "rising", {"f": 63, "cpm": 390.0}),
    ("Lebanon", "Asia", 6825445, 667, "rising", {"f": 30, "cpm": 420.0}),
    ("Nicaragua", "North America", 6624554, 55, "tiny", {"f": 57, "cpm": 90.0, "sparse": 2}),
    ("Kyrgyzstan", "Asia", 6524195, 34, "bump", {"f": 56, "tier": 3, "pv_offset": 1900.0}),
    ("El Salvador", "North America", 6486205, 313, "bump", {"f": 57, "tier": 3}),
    ("Turkmenistan", "Asia", 6031200, 13, "zero", {}),
    ("Singapore", "Asia", 5850342, 8358, "bump", {"f": 1, "tier": 3, "pv_offset": -2100.0}),
    ("Denmark", "Europe", 5792202, 137, "bump", {"f": 36, "tier": 3}),
    ("Finland", "Europe", 5540720, 18, "bump", {"f": 7, "tier": 3}),
    ("Congo", "Africa", 5518087, 16, "tiny", {"f": 53, "cpm": 85.0}),
    ("Slovakia", "Europe", 5459642, 114, "auto", {}),
    ("Norway", "Europe", 5421241, 15, "auto", {}),
    ("Oman", "Asia", 5106626, 15, "auto", {}),
    ("Palestine", "Asia", 5101414, 847, "auto", {}),
    ("Costa Rica", "North America", 5094118, 100, "auto", {}),
    ("Liberia", "Africa", 5057681, 53, "auto", {}),
    ("Ireland", "Europe", 4937786, 72, "auto", {}),
    ("Central African Republic", "Africa", 4829767, 8, "auto", {}),
    ("New Zealand", "Oceania", 4822233, 18, "auto", {}),
    ("Mauritania", "Africa", 4649658, 5, "auto", {}),
    ("Panama", "North America", 4314767, 58, "auto", {}),
    ("Kuwait", "Asia", 4270571, 240, "auto", {}),
    ("Croatia", "Europe", 4105267, 73, "auto", {}),
    ("Moldova", "Europe", 4033963, 123, "auto", {}),
    ("Georgia", "Asia", 3989167, 57, "auto", {}),
    ("Eritrea", "Africa", 3546421, 35, "auto", {}),
    ("Uruguay", "South America", 3473730, 20, "auto", {}),
    ("Bosnia and Herzegovina", "Europe", 3280819, 64, "auto", {}),
    ("Mongolia", "Asia", 3278290, 2, "auto", {}),
    ("Armenia", "Asia", 2963243, 104, "auto", {}),
    ("Jamaica", "North America", 2961167, 273, "auto", {}),
    ("Qatar", "Asia", 2881053, 248, "auto", {}),
    ("Albania", "Europe", 2877797, 105, "auto", {}),
    ("Lithuania", "Europe", 2722289, 43, "auto", {}),
    ("Namibia", "Africa", 2540905, 3, "auto", {}),
    ("Gambia", "Africa", 2416668, 239, "auto", {}),
    ("Botswana", "Africa", 2351627, 4, "auto", {}),
    ("Gabon", "Africa", 2225734, 9, "auto", {}),
    ("Lesotho", "Africa", 2142249, 71, "auto", {}),
    ("North Macedonia", "Europe", 2083374, 83, "auto", {}),
    ("Slovenia", "Europe", 2078938, 103, "auto", {}),
    ("Guinea-Bissau", "Africa", 1968001, 70, "auto", {}),
    ("Latvia", "Europe", 1886198, 31, "auto", {}),
    ("Kosovo", "Europe", 1810463, 168, "auto", {}),
    ("Bahrain", "Asia", 1701575, 2239, "auto", {}),
    ("Equatorial Guinea", "Africa", 1402985, 50, "auto", {}),
    ("Trinidad and Tobago", "North America", 1399488, 273, "auto", {}),
    ("Estonia", "Europe", 1326535, 31, "auto", {}),
    ("Timor-Leste", "Asia", 1318445, 89, "auto", {}),
    ("Mauritius", "Africa", 1271768, 626, "auto", {}),
    ("Cyprus", "Europe", 1207359, 131, "auto", {}),
    ("Eswatini", "Africa", 1160164, 67, "auto", {}),
    ("Djibouti", "Africa", 988000, 43, "auto", {}),
    ("Fiji", "Oceania", 896445, 49, "auto", {}),
    ("Comoros", "Africa", 869601, 467, "auto", {}),
    ("Guyana", "South America", 786552, 4, "auto", {}),
    ("Bhutan", "Asia", 771608, 20, "auto", {}),
    ("Solomon Islands", "Oceania", 686884, 25, "auto", {}),
    ("Montenegro", "Europe", 628066, 47, "auto", {}),
    ("Luxembourg", "Europe", 625978, 242, "auto", {}),
    ("Western Sahara", "Africa", 597339, 2, "late", {}),
    ("Suriname", "South America", 586632, 4, "auto", {}),
    ("Cape Verde", "Africa", 555987, 138, "auto", {}),
    ("Maldives", "Asia", 540544, 1802, "auto", {}),
    ("Malta", "Europe", 441543, 1380, "auto", {}),
    ("Brunei", "Asia", 437479, 83, "auto", {}),
    ("Belize", "North America", 397628, 17, "auto", {}),
    ("Bahamas", "North America", 393244, 39, "auto", {}),
    ("Iceland", "Europe", 341243, 3, "auto", {}),
    ("Vanuatu", "Oceania", 307145, 25, "zero", {}),
    ("Barbados", "North America", 287375, 668, "auto", {}),
    ("Sao Tome and Principe", "Africa", 219159, 228, "auto", {}),
    ("Samoa", "Oceania", 198414, 70, "zero", {}),
    ("Saint Lucia", "North America", 183627, 301, "auto", {}),
    ("Micronesia", "Oceania", 115023, 164, "zero", {}),
    ("Grenada", "North America", 112523, 317, "auto", {}),
    ("Saint Vincent and the Grenadines", "North America", 110940, 284, "auto", {}),
    ("Tonga", "Oceania", 105695, 147, "zero", {}),
    ("Seychelles", "Africa", 98347, 214, "auto", {}),
    ("Antigua and Barbuda", "North America", 97929, 223, "auto", {}),
    ("Andorra", "Europe", 77265, 164, "auto", {}),
    ("Dominica", "North America", 71986, 96, "auto", {}),
    ("Marshall Islands", "Oceania", 59190, 329, "zero", {}),
    ("Saint Kitts and Nevis", "North America", 53199, 205, "auto", {}),
    ("Monaco", "Europe", 39242, 26337, "auto", {}),
    ("Liechtenstein", "Europe", 38128, 238, "auto", {}),
    ("San Marino", "Europe", 33931, 566, "auto", {}),
    ("Palau", "Oceania", 18094, 40, "zero", {}),
    ("Tuvalu", "Oceania", 11792, 393, "zero", {}),
    ("French Polynesia", "Oceania", 280908, 77, "auto", {}),
    ("New Caledonia", "Oceania", 285498, 16, "auto", {}),
    ("Aruba", "North America", 106766, 593, "auto", {}),
    ("Curacao", "North America", 164093, 370, "auto", {}),
    ("Channel Islands", "Europe", 173863, 915, "auto", {}),
    ("Isle of Man", "Europe", 85033, 149, "auto", {}),
    ("Gibraltar", "Europe", 33691, 3369, "auto", {}),
    ("Bermuda", "North America", 62278, 1246, "auto", {}),
    ("Cayman Islands", "North America", 65722, 274, "auto", {}),
    ("Faroe Islands", "Europe", 48863, 35, "auto", {}),
    ("Greenland", "North America", 56770, 0.14, "auto", {}),
]

CONTINENT_FIRST_CASE = {
    "Asia": (25, 55),
    "Europe": (28, 45),
    "Africa": (48, 75),
    "North America": (38, 60),
    "South America": (40, 58),
    "Oceania": (40, 65),
}


def weekly(t: np.ndarray, phase: float) -> np.ndarray:
    return 1.0 + WEEKLY_AMP * np.sin(2.0 * np.pi * (t + phase) / 7.0)


def half_gauss(t, peak, sigma_r, sigma_f):
    sig = np.where(t <= peak, sigma_r, sigma_f)
    return np.exp(-((t - peak) ** 2) / (2.0 * sig**2))


def finalize(curve: np.ndarray, f: int, phase: float) -> np.ndarray:
    """Weekly modulation, zero before the first case, integer counts, and at
    least one case on the first-case day."""
    t = np.arange(N_DAYS, dtype=float)
    out = np.rint(np.maximum(curve, 0.0) * weekly(t, phase)).astype(np.int64)
    out[:f] = 0
    if out[f] < 1:
        out[f] = 1
    return out


def bump_daily(pop, dens, params, crng):
    tier = params["tier"]
    f = params["f"]
    pd_local = PD_BASE + PD_SLOPE * pop + crng.normal(0, PD_SD)
    pv = (PV_COEF * pop**PV_POWER + PV_DENS * dens
          + params.get("pv_offset", 0.0) + crng.normal(0, NOISE_SD[tier]))
    pv = max(pv, PV_FLOOR)
    cpm = CPM_COEF * pop**-0.2 * np.exp(crng.normal(0, CPM_LSD))
    total = cpm * pop / 1e6
    width = float(np.clip(total / (ROOT2PI_HALF * pv), WIDTH_MIN, WIDTH_MAX))
    return _shaped_bump(pop, f, pd_local, pv, width, crng, rescale_to=None)


def pinned_daily(pop, dens, params, crng):
    f = params["f"]
    pv = params["pv"]
    total = params["cpm"] * pop / 1e6
    pd_local = params.get("pd", PD_BASE + PD_SLOPE * pop) + crng.normal(0, PD_SD)
    width = float(np.clip(total / (ROOT2PI_HALF * pv), 12.0, WIDTH_MAX))
    return _shaped_bump(pop, f, pd_local, pv, width, crng, rescale_to=total)


def _shaped_bump(pop, f, pd_local, pv, width, crng, rescale_to=None):
    """Two-sided gaussian bump with a floor tail; the rising/falling split is
    chosen to land the rising/falling mean ratio near the drawn target."""
    n = N_DAYS - f
    p = pd_local
    ratio_target = crng.uniform(0.80, 1.05)
    sigma_r = ratio_target * p * width / ((n - p) + ratio_target * p)
    sigma_r = float(np.clip(sigma_r, 6.0, p / 2.8))
    tail_frac = crng.uniform(0.02, 0.08)
    sigma_f = max(width - sigma_r - tail_frac * (n - p) / ROOT2PI_HALF, 8.0)
    # keep the tail low enough that the trailing week clears the
    # convergence ratio even under weekly noise
    sigma_f = min(sigma_f, (n - p) / 1.2)
    t = np.arange(N_DAYS, dtype=float)
    peak_abs = f + p
    curve = pv * half_gauss(t, peak_abs, sigma_r, sigma_f)
    tail = np.where(t > peak_abs, tail_frac * pv, 0.0)
    curve = np.maximum(curve, tail)
    curve[:f] = 0.0
    if rescale_to is not None and curve.sum() > 0:
        curve *= rescale_to / curve.sum()
    return finalize(curve, f, crng.uniform(0, 7))


def rising_daily(pop, dens, params, crng):
    f = params["f"]
    t = np.arange(N_DAYS, dtype=float)
    if "peak_tau" in params:
        peak_abs = f + params["peak_tau"]
        sigma = params["sigma"]
        pv = params["pv"]
        curve = pv * np.exp(-((t - peak_abs) ** 2) / (2.0 * sigma**2))
    else:
        n = N_DAYS - f
        peak_tau = n * crng.uniform(1.12, 1.55)
        sigma = 0.38 * peak_tau
        shape = np.exp(-((t - (f + peak_tau)) ** 2) / (2.0 * sigma**2))
        shape[:f] = 0.0
        total = params["cpm"] * pop / 1e6
        pv = total / max(shape.sum(), 1e-9)
        curve = pv * shape
    curve[:f] = 0.0
    return finalize(curve, f, crng.uniform(0, 7))


def two_wave_daily(pop, dens, params, crng):
    f = params["f"]
    t = np.arange(N_DAYS, dtype=float)
    wave1 = 25000.0 * half_gauss(t, f + 95, 26.0, 34.0)
    wave2 = 55000.0 * np.exp(-((t - (f + 200.0)) ** 2) / (2.0 * 45.0**2))
    curve = wave1 + wave2
    curve[:f] = 0.0
    return finalize(curve, f, crng.uniform(0, 7))


def sigmoid_daily(pop, dens, params, crng):
    f = params["f"]
    t = np.arange(N_DAYS, dtype=float)
    tau = t - f
    curve = 30000.0 / (1.0 + np.exp(-(tau - 62.0) / 15.0)) * (1.0 + 0.0015 * tau)
    curve[:f] = 0.0
    return finalize(curve, f, crng.uniform(0, 7))


def plateau_daily(pop, dens, params, crng):
    f = params["f"]
    n = N_DAYS - f
    rise_len = crng.uniform(35, 55)
    total = params["cpm"] * pop / 1e6
    level = total / (n - rise_len / 2.0)
    t = np.arange(N_DAYS, dtype=float)
    tau = t - f
    curve = level * np.clip(tau / rise_len, 0.0, 1.0)
    curve *= 1.0 + 0.06 * np.sin(2.0 * np.pi * tau / 43.0)
    curve[:f] = 0.0
    return finalize(curve, f, crng.uniform(0, 7))


def tiny_daily(pop, dens, params, crng):
    # Low attack rate and still creeping upward: excluded from every cohort
    # both by the cases-per-million threshold and by non-convergence.
    f = params["f"]
    n = N_DAYS - f
    peak_tau = n * crng.uniform(1.2, 1.8)
    sigma = 0.45 * peak_tau
    t = np.arange(N_DAYS, dtype=float)
    shape = np.exp(-((t - (f + peak_tau)) ** 2) / (2.0 * sigma**2))
    shape[:f] = 0.0
    total = params["cpm"] * pop / 1e6
    pv = total / max(shape.sum(), 1e-9)
    curve = pv * shape
    return finalize(curve, f, crng.uniform(0, 7))


def late_daily(pop, dens, params, crng):
    f = N_DAYS - 12
    daily = np.zeros(N_DAYS, dtype=np.int64)
    counts = crng.integers(0, 4, size=12)
    daily[f:] = counts
    daily[f] = max(daily[f], 1)
    return daily


def auto_daily(pop, dens, params, crng, continent):
    lo, hi = CONTINENT_FIRST_CASE[continent]
    f = int(crng.integers(lo, hi + 1))
    kind = crng.choice(["bump", "rising", "tiny"], p=[0.5, 0.3, 0.2])
    cpm = float(np.exp(crng.uniform(np.log(60), np.log(9000))))
    if kind == "tiny":
        cpm = float(crng.uniform(5, 90))
        return tiny_daily(pop, dens, {"f": f, "cpm": cpm}, crng)
    if kind == "rising":
        return rising_daily(pop, dens, {"f": f, "cpm": cpm}, crng)
    total = cpm * pop / 1e6
    pd_local = PD_BASE + PD_SLOPE * pop + crng.normal(0, PD_SD)
    pv = total / (ROOT2PI_HALF * crng.uniform(WIDTH_MIN, 70.0))
    width = float(np.clip(total / (ROOT2PI_HALF * max(pv, 1e-9)), WIDTH_MIN, WIDTH_MAX))
    return _shaped_bump(pop, f, pd_local, max(pv, 1.0), width, crng)


BUILDERS = {
    "bump": bump_daily,
    "pinned": pinned_daily,
    "rising": rising_daily,
    "two_wave": two_wave_daily,
    "sigmoid": sigmoid_daily,
    "plateau": plateau_daily,
    "tiny": tiny_daily,
    "late": late_daily,
}


def build_country(idx, name, continent, pop, dens, profile, params):
    crng = np.random.default_rng([SEED, idx])
    if profile == "zero":
        daily = np.zeros(N_DAYS, dtype=np.int64)
        first_row = 0
    elif profile == "auto":
        daily = auto_daily(pop, dens, params, crng, continent)
        first_row = int(np.argmax(daily > 0))
    elif profile == "late":
        daily = late_daily(pop, dens, params, crng)
        first_row = N_DAYS - 12
    else:
        daily = BUILDERS[profile](pop, dens, params, crng)
        lead = int(crng.integers(0, 4))
        first_row = max(0, params.get("f", 0) - lead)
    cum = np.cumsum(daily)
    # Reporting revisions: a raw downward blip in the cumulative series on
    # the listed days, which ingestion is expected to clamp away.
    for day, frac in params.get("dips", []):
        if 0 < day < N_DAYS - 1:
            cum = cum.copy()
            cum[day] = int(cum[day] * (1.0 - frac))
    deaths = np.zeros(N_DAYS, dtype=np.int64)
    recovered = np.zeros(N_DAYS, dtype=np.int64)
    death_rate = crng.uniform(0.015, 0.06)
    recov_rate = crng.uniform(0.55, 0.9)
    deaths[7:] = np.rint(death_rate * cum[:-7]).astype(np.int64)
    recovered[14:] = np.rint(recov_rate * cum[:-14]).astype(np.int64)
    return {
        "name": name,
        "continent": continent,
        "population": pop,
        "density": dens,
        "first_row": first_row,
        "cumulative": cum,
        "deaths": deaths,
        "recovered": None if params.get("no_recovered") else recovered,
        "gaps": set(params.get("gaps", [])),
        "sparse": params.get("sparse"),
    }


def emit_rows(country):
    rows = []
    sparse = country["sparse"]
    for day in range(country["first_row"], N_DAYS):
        if day in country["gaps"]:
            continue
        if sparse and day % sparse != 0 and day != N_DAYS - 1:
            continue
        cum = int(country["cumulative"][day])
        deaths = int(country["deaths"][day])
        recov = country["recovered"]
        active = cum - deaths - (int(recov[day]) if recov is not None else 0)
        rows.append(
            [
                (START + timedelta(days=day)).isoformat(),
                country["name"],
                country["continent"],
                country["population"],
                f"{country['density']:g}",
                cum,
                deaths,
                "" if recov is None else int(recov[day]),
                max(active, 0),
            ]
        )
    return rows


def generate() -> list[list]:
    assert len(COUNTRIES) == 207, f"country table has {len(COUNTRIES)} entries"
    assert len({c[0] for c in COUNTRIES}) == 207, "duplicate country name"
    all_rows = []
    for idx, (name, continent, pop, dens, profile, params) in enumerate(COUNTRIES):
        country = build_country(idx, name, continent, pop, dens, profile, params)
        all_rows.extend(emit_rows(country))
    return all_rows


def write_csv(path: str):
    rows = generate()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "date", "country", "continent", "population",
                "population_density", "total_cases", "total_deaths",
                "recovered", "active_cases",
            ]
        )
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {path}")


DESIGN_F1 = {
    "Pakistan", "Russia", "Turkey", "Iran", "Germany", "United Kingdom",
    "France", "Italy", "Spain", "Canada", "Saudi Arabia", "Peru",
}
DESIGN_F2_ONLY = {
    "Chile", "Ecuador", "Netherlands", "Bolivia", "Belgium",
    "Dominican Republic", "Portugal", "Sweden",
}
DESIGN_F3_ONLY = {
    "South Korea", "Malaysia", "Cuba", "Greece", "Jordan",
    "United Arab Emirates", "Honduras", "Hungary", "Tajikistan", "Belarus",
    "Austria", "Serbia", "Israel", "Switzerland", "Paraguay", "Bulgaria",
    "Kyrgyzstan", "El Salvador", "Singapore", "Denmark", "Finland",
}


def check(path: str, full: bool):
    import time

    sys.path.insert(0, "src")
    from casecast import (
        apply_filter, builtin_filters, calibrate, fit_peak_models,
        load_snapshot, predict_targets, summarize_snapshot,
    )

    snap = load_snapshot(path)
    print(f"countries: {len(snap)}")
    assert len(snap) == 207
    summaries = summarize_snapshot(snap, 7)
    cohorts = {}
    for spec in builtin_filters():
        cohorts[spec.id] = apply_filter(snap, spec, summaries=summaries)
        print(f"{spec.id}: {len(cohorts[spec.id])} members")
    design = {
        "F1": DESIGN_F1,
        "F2": DESIGN_F1 | DESIGN_F2_ONLY,
        "F3": DESIGN_F1 | DESIGN_F2_ONLY | DESIGN_F3_ONLY,
    }
    for fname, want in design.items():
        got = {c.name for c, _ in cohorts[fname]}
        if got != want:
            print(f"  {fname} extra: {sorted(got - want)}")
            print(f"  {fname} missing: {sorted(want - got)}")
    for target in ("India", "US", "Brazil"):
        s = summaries.get(target)
        print(f"{target}: converged={None if s is None else s.converged}")
    preds = {}
    for spec in builtin_filters():
        cohort = cohorts[spec.id]
        reg = fit_peak_models(cohort, spec.id)
        cal = calibrate(cohort, spec.id)
        p = predict_targets(reg, snap.countries["India"])
        preds[spec.id] = p
        print(
            f"{spec.id}: R2v={reg.model_peak_value.r_squared:.4f} "
            f"R2d={reg.model_peak_day.r_squared:.4f} "
            f"R2t={reg.model_total_cases.r_squared:.4f} "
            f"mean_ratio={cal.mean_ratio:.3f} "
            f"India pv={p.peak_value:.0f} pd={p.peak_day}"
        )
    pv = [preds[f].peak_value for f in ("F1", "F2", "F3")]
    print(f"India monotone: {pv[0] <= pv[1] <= pv[2]}, "
          f"inside: {all(0.7e5 <= v <= 1.8e5 for v in pv)}")
    if full:
        from casecast import run_ssm
        t0 = time.time()
        india = snap.countries["India"]
        for spec in builtin_filters():
            cohort = cohorts[spec.id]
            fc = run_ssm(india, cohort, fit_peak_models(cohort, spec.id))
            print(
                f"{spec.id}: forecast peak day {fc.peak_day} "
                f"value {fc.peak_value:.0f} bias {fc.bias:.0f} "
                f"[{time.time() - t0:.1f}s]"
            )


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="src/casecast/data/snapshot_2020.csv")
    ap.add_argument("--check", action="store_true")
    ap.add_argument("--full", action="store_true")
    args = ap.parse_args()
    write_csv(args.out)
    if args.check:
        check(args.out, args.full)


if __name__ == "__main__":
    main()
