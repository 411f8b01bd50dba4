#!/usr/bin/env python3
"""Regenerate the bundled sample datasets under data/datasets/.

The bundled extracts are small, deterministic stand-ins for the BLS tables the
figure recipes were designed around. Rows of the OEWS 2023 software developer
table for AL, AK, AZ, AR, CA, CO, CT and DE are the published values; every
other value is synthesized from a seeded generator so that the recipes render
realistic-looking figures without network access. Do not cite them as data.

Usage: make_sample_data.py <repo-root>
"""
import csv
import json
import math
import random
import sys
from pathlib import Path

STATES = [
    ("AL", "Alabama", 5.16), ("AK", "Alaska", 0.74), ("AZ", "Arizona", 7.58),
    ("AR", "Arkansas", 3.09), ("CA", "California", 39.43), ("CO", "Colorado", 5.96),
    ("CT", "Connecticut", 3.68), ("DE", "Delaware", 1.05), ("DC", "District of Columbia", 0.70),
    ("FL", "Florida", 23.37), ("GA", "Georgia", 11.18), ("HI", "Hawaii", 1.45),
    ("ID", "Idaho", 2.00), ("IL", "Illinois", 12.71), ("IN", "Indiana", 6.92),
    ("IA", "Iowa", 3.24), ("KS", "Kansas", 2.97), ("KY", "Kentucky", 4.59),
    ("LA", "Louisiana", 4.60), ("ME", "Maine", 1.41), ("MD", "Maryland", 6.26),
    ("MA", "Massachusetts", 7.14), ("MI", "Michigan", 10.14), ("MN", "Minnesota", 5.79),
    ("MS", "Mississippi", 2.94), ("MO", "Missouri", 6.25), ("MT", "Montana", 1.14),
    ("NE", "Nebraska", 2.01), ("NV", "Nevada", 3.27), ("NH", "New Hampshire", 1.41),
    ("NJ", "New Jersey", 9.50), ("NM", "New Mexico", 2.13), ("NY", "New York", 19.87),
    ("NC", "North Carolina", 11.05), ("ND", "North Dakota", 0.80), ("OH", "Ohio", 11.88),
    ("OK", "Oklahoma", 4.10), ("OR", "Oregon", 4.27), ("PA", "Pennsylvania", 13.08),
    ("RI", "Rhode Island", 1.11), ("SC", "South Carolina", 5.48), ("SD", "South Dakota", 0.92),
    ("TN", "Tennessee", 7.23), ("TX", "Texas", 31.29), ("UT", "Utah", 3.50),
    ("VT", "Vermont", 0.65), ("VA", "Virginia", 8.81), ("WA", "Washington", 7.96),
    ("WV", "West Virginia", 1.77), ("WI", "Wisconsin", 5.96), ("WY", "Wyoming", 0.59),
]
SOUTH = {"AL", "AR", "FL", "GA", "KY", "LA", "MS", "NC", "OK", "SC", "TN", "TX", "VA", "WV"}
HIGH_COST = {"CA", "WA", "NY", "NJ", "MA", "CT", "MD", "DC", "OR", "CO", "HI", "AK", "IL", "MN"}
NO_BOS = {"DC", "NJ", "RI", "DE", "CT"}

NY_POP = {
    "Kings": 2617, "Queens": 2316, "New York": 1660, "Suffolk": 1535, "Bronx": 1385,
    "Nassau": 1395, "Westchester": 1004, "Erie": 951, "Monroe": 752, "Richmond": 498,
    "Onondaga": 467, "Orange": 407, "Rockland": 345, "Albany": 316, "Dutchess": 299,
    "Saratoga": 238, "Oneida": 228, "Niagara": 210, "Broome": 197, "Ulster": 182,
    "Rensselaer": 160, "Schenectady": 161, "Chautauqua": 125, "Oswego": 118,
    "Jefferson": 115, "Ontario": 113, "St. Lawrence": 107, "Tompkins": 106,
    "Putnam": 98, "Steuben": 92, "Wayne": 91, "Chemung": 82, "Clinton": 79,
    "Sullivan": 80, "Cattaraugus": 76, "Cayuga": 75, "Madison": 67, "Warren": 65,
    "Livingston": 62, "Columbia": 61, "Washington": 60, "Herkimer": 59, "Otsego": 58,
    "Genesee": 57, "Fulton": 52, "Montgomery": 49, "Tioga": 48, "Greene": 48,
    "Franklin": 47, "Chenango": 46, "Cortland": 46, "Allegany": 47, "Delaware": 44,
    "Orleans": 40, "Wyoming": 40, "Essex": 37, "Seneca": 33, "Schoharie": 30,
    "Lewis": 27, "Yates": 25, "Schuyler": 17, "Hamilton": 5,
}

# OEWS May 2023, Software Developers (15-1252): published rows.
SOFTWARE_PUBLISHED = {
    "AL": (0.76, 53.19, 1.5, 29.58, 37.73, 49.39, 64.57, 81.29),
    "AK": (0.08, 70.01, 4.6, 41.95, 52.27, 72.79, 84.83, 93.45),
    "AZ": (1.13, 61.56, 1.6, 37.72, 45.77, 59.22, 69.85, 84.83),
    "AR": (0.41, 42.37, 4.8, 14.13, 27.96, 44.3, 53.97, 64.05),
    "CA": (1.55, 83.55, 0.8, 49.64, 65.04, 81.09, 100.92, 108.97),
    "CO": (1.47, 69.92, 1.1, 41.62, 50.73, 64.89, 80.44, 99.25),
    "CT": (1.01, 61.75, 1.5, 37.51, 47.93, 60.14, 75.69, 89.63),
    "DE": (0.95, 63.29, 2, 44.08, 51.97, 63.31, 73.29, 84.04),
}


def fmt_thousands(v):
    return f"{int(round(v)):,}"


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_manifest(d, manifest):
    (d / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def quarters(first_year, first_q, count):
    out = []
    y, q = first_year, first_q
    for _ in range(count):
        out.append((y, q))
        q += 1
        if q == 5:
            y, q = y + 1, 1
    return out


def pct(a, b):
    return 100.0 * (a - b) / b


def qcew_all_industries(root, rng):
    d = root / "qcew-all-industries-2025q1"
    d.mkdir(parents=True, exist_ok=True)
    qs = quarters(2020, 1, 21)
    scalar, series = [], []
    for code, _, pop in STATES:
        estab = pop * 1e6 * rng.uniform(0.030, 0.042)
        base = rng.uniform(1050, 1450) * (1.18 if code in HIGH_COST else 1.0)
        growth = rng.uniform(0.008, 0.014)
        wages = []
        for i, (_, q) in enumerate(qs):
            bump = 1.09 if q == 1 else (0.97 if q == 3 else 1.0)
            wages.append(round(base * (1 + growth) ** i * bump * rng.uniform(0.99, 1.01), 0))
        for (y, q), w in zip(qs, wages):
            series.append([code, f"Q{q} {y}", f"{w:.0f}"])
        wage_chg = pct(wages[20], wages[16])
        emp_chg = rng.gauss(0.9, 0.9) + (0.6 if code in {"ID", "UT", "TX", "FL", "SC", "NC"} else 0.0)
        scalar.append([code, fmt_thousands(estab), f"{wage_chg:.1f}", f"{emp_chg:.1f}"])
    write_csv(d / "establishments_2025q1.csv",
              ["State", "Total Establishments", "OTY Wage Pct", "OTY Emp Pct"], scalar)
    write_csv(d / "avg_weekly_wage_long.csv", ["State", "Quarter", "Avg Weekly Wage"], series)
    write_manifest(d, {
        "id": "qcew-all-industries-2025q1",
        "title": "QCEW all industries, establishments 2025 Q1 and quarterly wages Q1 2020 to Q1 2025",
        "atlas": "us-states-dc",
        "provenance": {
            "url": "https://data.bls.gov/maps/cew/us",
            "vintage": "2025 Q1",
            "note": "Synthetic sample shaped like the QCEW state extract; not published values.",
        },
        "sources": [
            {"path": "establishments_2025q1.csv", "adapter": {
                "key_column": "State",
                "columns": [
                    {"source": "Total Establishments", "name": "estab_count", "unit": "establishments"},
                    {"source": "OTY Wage Pct", "name": "wage_pct_chg", "unit": "percent"},
                    {"source": "OTY Emp Pct", "name": "emp_pct_chg", "unit": "percent"},
                ],
            }},
            {"path": "avg_weekly_wage_long.csv", "adapter": {
                "key_column": "State",
                "columns": [],
                "time": {"long": {"time_column": "Quarter", "value_column": "Avg Weekly Wage",
                                  "group": "avg_weekly_wage"}},
            }},
        ],
    })


def qcew_covid(root, rng):
    d = root / "qcew-covid-otyc"
    d.mkdir(parents=True, exist_ok=True)
    qs = quarters(2019, 1, 12)
    lh_shock = [1.0, 1.0, 1.01, 1.0, 0.93, 0.62, 0.78, 0.8, 0.8, 0.9, 0.95, 0.97]
    con_shock = [1.0, 1.03, 1.05, 1.02, 1.0, 0.95, 1.0, 1.0, 1.0, 1.02, 1.05, 1.03]
    header = ["State", "total_emp_2021q2"]
    header += [f"lh_{y}q{q}" for y, q in qs] + [f"con_{y}q{q}" for y, q in qs]
    rows = []
    for code, _, pop in STATES:
        total = pop * 1e6 * rng.uniform(0.43, 0.5)
        lh_base = total * rng.uniform(0.09, 0.13)
        con_base = total * rng.uniform(0.04, 0.07)
        state_factor = rng.uniform(0.7, 1.3)
        lh = []
        for i, s in enumerate(lh_shock):
            depth = 1 - (1 - s) * state_factor
            if code == "HI" and i >= 9:
                depth *= 1.12
            lh.append(lh_base * depth * rng.uniform(0.99, 1.01))
        con = [con_base * (1 + (s - 1) * rng.uniform(0.2, 2.5)) for s in con_shock]
        row = [code, fmt_thousands(total)] + [f"{v:.0f}" for v in lh] + [f"{v:.0f}" for v in con]
        rows.append(row)
    write_csv(d / "covid_quarterly_employment.csv", header, rows)
    write_manifest(d, {
        "id": "qcew-covid-otyc",
        "title": "QCEW quarterly employment, Leisure and Hospitality (1026) and Construction (1012), 2019 to 2021",
        "atlas": "us-states-dc",
        "provenance": {
            "url": "https://data.bls.gov/maps/cew/us",
            "vintage": "2019 Q1 to 2021 Q4",
            "note": "Synthetic sample shaped like the QCEW super-sector extract; not published values.",
        },
        "sources": [{"path": "covid_quarterly_employment.csv", "adapter": {
            "key_column": "State",
            "columns": [{"source": "total_emp_2021q2", "name": "total_emp_2021q2", "unit": "jobs"}],
            "time": {"wide": [
                {"pattern": "^lh_(?P<label>\\d{4}q\\d)$", "group": "leisure_hospitality"},
                {"pattern": "^con_(?P<label>\\d{4}q\\d)$", "group": "construction"},
            ]},
        }}],
    })


def police(root, rng):
    d = root / "oews-police-patrol-2023"
    d.mkdir(parents=True, exist_ok=True)
    rows = []
    for code, _, pop in STATES:
        mean = rng.gauss(34.0, 3.0) - (5.0 if code in SOUTH else 0.0) + (8.0 if code in HIGH_COST else 0.0)
        lq = max(0.45, rng.gauss(1.0, 0.2) + 0.9 * math.exp(-((mean - 37.0) ** 2) / 18.0) - 0.25)
        n_msa = max(1, int(pop * 1.3))
        msas = [mean * rng.uniform(0.88, 1.16) for _ in range(n_msa)]
        msa_cells = [f"{min(msas):.2f}", f"{max(msas):.2f}", f"{sum(msas) / len(msas):.2f}"]
        if code in NO_BOS:
            bos_cells = ["**", "**", "**"]
        else:
            boss = [mean * rng.uniform(0.72, 0.95) for _ in range(rng.randint(1, 4))]
            bos_cells = [f"{min(boss):.2f}", f"{max(boss):.2f}", f"{sum(boss) / len(boss):.2f}"]
        rows.append([code, f"{mean:.2f}", f"{lq:.2f}"] + msa_cells + bos_cells)
    write_csv(d / "police_patrol_officers.csv",
              ["AREA", "H_MEAN", "LOC_QUOTIENT", "MSA_MIN", "MSA_MAX", "MSA_MEAN",
               "BOS_MIN", "BOS_MAX", "BOS_MEAN"], rows)
    cols = [("H_MEAN", "h_mean", "usd/hour"), ("LOC_QUOTIENT", "lq", "ratio"),
            ("MSA_MIN", "msa_min", "usd/hour"), ("MSA_MAX", "msa_max", "usd/hour"),
            ("MSA_MEAN", "msa_mean", "usd/hour"), ("BOS_MIN", "bos_min", "usd/hour"),
            ("BOS_MAX", "bos_max", "usd/hour"), ("BOS_MEAN", "bos_mean", "usd/hour")]
    write_manifest(d, {
        "id": "oews-police-patrol-2023",
        "title": "OEWS 2023 Police and Sheriff's Patrol Officers (33-3051), state, MSA and BOS wages",
        "atlas": "us-states-dc",
        "provenance": {
            "url": "https://www.bls.gov/oes/tables.htm",
            "vintage": "May 2023",
            "note": "Synthetic sample shaped like the OEWS state/MSA/BOS tables; '**' marks areas with no BOS estimate.",
        },
        "sources": [{"path": "police_patrol_officers.csv", "adapter": {
            "key_column": "AREA",
            "columns": [{"source": s, "name": n, "unit": u} for s, n, u in cols],
            "missing_markers": ["", "*", "**", "#"],
        }}],
    })


def ny_manufacturing(root, rng, atlas_path):
    d = root / "qcew-ny-manufacturing-2024q4"
    d.mkdir(parents=True, exist_ok=True)
    atlas = json.loads(atlas_path.read_text())
    rows = []
    for f in atlas["features"]:
        p = f["properties"]
        if p.get("kind") == "outline":
            continue
        name = p["name"]
        pop = NY_POP[name] * 1000
        emp = rng.gauss(-1.2, 2.2)
        wage = rng.gauss(3.5, 2.5)
        if name == "Hamilton":
            emp, wage = -31.0, -18.5
        emp_cell = f"{emp:.1f}"
        wage_cell = "(ND)" if name == "Schuyler" else f"{wage:.1f}"
        rows.append([p["id"], name, fmt_thousands(pop), emp_cell, wage_cell])
    write_csv(d / "ny_manufacturing_2024q4.csv",
              ["FIPS", "County", "Population July 2024", "Emp OTY Pct", "Wage OTY Pct"], rows)
    write_manifest(d, {
        "id": "qcew-ny-manufacturing-2024q4",
        "title": "QCEW 2024 Q4 Manufacturing, New York counties, over-the-year change",
        "atlas": "ny-counties",
        "provenance": {
            "url": "https://data.bls.gov/maps/cew/us",
            "vintage": "2024 Q4 vs 2023 Q4",
            "note": "Synthetic sample; populations approximate the Census July 2024 estimates. '(ND)' marks non-disclosable cells.",
        },
        "sources": [{"path": "ny_manufacturing_2024q4.csv", "adapter": {
            "key_column": "FIPS",
            "columns": [
                {"source": "Population July 2024", "name": "population_2024", "unit": "persons"},
                {"source": "Emp OTY Pct", "name": "emp_oty_pct", "unit": "percent"},
                {"source": "Wage OTY Pct", "name": "wage_oty_pct", "unit": "percent"},
            ],
            "missing_markers": ["", "(ND)"],
        }}],
    })


def teachers(root, rng):
    d = root / "oews-elementary-teachers-2023"
    d.mkdir(parents=True, exist_ok=True)
    rows = []
    for code, _, _ in STATES:
        wage_gen = rng.gauss(33.0, 4.0) + (6.0 if code in HIGH_COST else 0.0) - (3.0 if code in SOUTH else 0.0)
        wage_spec = wage_gen * rng.uniform(0.95, 1.07)
        lq_spec = max(0.2, rng.gauss(1.0, 0.35))
        if code == "WV":
            lq_spec, wage_gen, wage_spec = 2.3, 26.1, 25.4
        if code in {"WA", "OR"}:
            lq_spec = rng.uniform(0.35, 0.55)
            wage_spec = wage_gen * 1.1
        lq_gen = max(0.3, 1.0 + 0.12 * (lq_spec - 1.0) ** 2 + rng.gauss(0, 0.12))
        rows.append([code, f"{lq_spec:.2f}", f"{lq_gen:.2f}", f"{wage_spec:.2f}", f"{wage_gen:.2f}"])
    write_csv(d / "elementary_teachers.csv",
              ["STATE", "LQ_SPECIAL_ED", "LQ_GENERAL_ED", "H_MEAN_SPECIAL_ED", "H_MEAN_GENERAL_ED"], rows)
    write_manifest(d, {
        "id": "oews-elementary-teachers-2023",
        "title": "OEWS 2023 Elementary School Teachers (25-2021) and Special Education Teachers (25-2056)",
        "atlas": "us-states-dc",
        "provenance": {
            "url": "https://data.bls.gov/oesmap",
            "vintage": "May 2023",
            "note": "Synthetic sample shaped like the OEWS state tables; not published values.",
        },
        "sources": [{"path": "elementary_teachers.csv", "adapter": {
            "key_column": "STATE",
            "columns": [
                {"source": "LQ_SPECIAL_ED", "name": "lq_special", "unit": "ratio"},
                {"source": "LQ_GENERAL_ED", "name": "lq_general", "unit": "ratio"},
                {"source": "H_MEAN_SPECIAL_ED", "name": "wage_special", "unit": "usd/hour"},
                {"source": "H_MEAN_GENERAL_ED", "name": "wage_general", "unit": "usd/hour"},
            ],
        }}],
    })


def software(root, rng):
    d = root / "oews-software-developers-2023"
    d.mkdir(parents=True, exist_ok=True)
    rows = []
    for code, _, _ in STATES:
        if code in SOFTWARE_PUBLISHED:
            vals = SOFTWARE_PUBLISHED[code]
            rows.append([code] + [f"{v:g}" for v in vals])
            continue
        mean = rng.gauss(58.0, 6.0) + (8.0 if code in HIGH_COST else 0.0)
        lq = max(0.1, rng.gauss(0.85, 0.3) + (0.4 if code in HIGH_COST else 0.0))
        prse = round(rng.uniform(0.9, 4.5), 1)
        p50 = mean * rng.uniform(0.95, 1.02)
        p25 = p50 * rng.uniform(0.75, 0.82)
        p10 = p25 * rng.uniform(0.7, 0.82)
        p75 = p50 * rng.uniform(1.18, 1.26)
        p90 = p75 * rng.uniform(1.12, 1.22)
        rows.append([code, f"{lq:.2f}", f"{mean:.2f}", f"{prse:.1f}", f"{p10:.2f}",
                     f"{p25:.2f}", f"{p50:.2f}", f"{p75:.2f}", f"{p90:.2f}"])
    header = ["STATE", "LOCATION QUOTIENT", "H_MEAN", "MEAN_PRSE", "H_PCT10", "H_PCT25",
              "H_MEDIAN", "H_PCT75", "H_PCT90"]
    write_csv(d / "software_developers.csv", header, rows)
    names = ["lq", "h_mean", "mean_prse", "h_pct10", "h_pct25", "h_median", "h_pct75", "h_pct90"]
    units = ["ratio", "usd/hour", "percent", "usd/hour", "usd/hour", "usd/hour", "usd/hour", "usd/hour"]
    write_manifest(d, {
        "id": "oews-software-developers-2023",
        "title": "OEWS 2023 Software Developers (15-1252), state employment and hourly wages",
        "atlas": "us-states-dc",
        "provenance": {
            "url": "https://www.bls.gov/oes/2023/may/oes151252.htm",
            "vintage": "May 2023",
            "note": "Rows AL, AK, AZ, AR, CA, CO, CT, DE are the published estimates; remaining rows are synthetic.",
        },
        "sources": [{"path": "software_developers.csv", "adapter": {
            "key_column": "STATE",
            "columns": [{"source": s, "name": n, "unit": u} for s, n, u in zip(header[1:], names, units)],
        }}],
    })


def main():
    repo = Path(sys.argv[1])
    root = repo / "data" / "datasets"
    root.mkdir(parents=True, exist_ok=True)
    qcew_all_industries(root, random.Random(11))
    qcew_covid(root, random.Random(21))
    police(root, random.Random(22))
    ny_manufacturing(root, random.Random(23), repo / "crates/core/assets/atlases/ny-counties.geojson")
    teachers(root, random.Random(33))
    software(root, random.Random(34))


if __name__ == "__main__":
    main()
