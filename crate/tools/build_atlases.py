#!/usr/bin/env python3
"""Convert the pre-projected us-atlas TopoJSON files into the bundled GeoJSON atlases.

Usage: build_atlases.py <path-to-us-atlas-package> <output-dir>

The us-atlas package (ISC license, derived from U.S. Census Bureau cartographic
boundary files) ships Albers-projected geometry with Alaska and Hawaii moved
into insets. Coordinates are already planar screen units (y grows downward).
"""
import json
import math
import sys
from pathlib import Path

FIPS_TO_POSTAL = {
    "01": "AL", "02": "AK", "04": "AZ", "05": "AR", "06": "CA", "08": "CO", "09": "CT",
    "10": "DE", "11": "DC", "12": "FL", "13": "GA", "15": "HI", "16": "ID", "17": "IL",
    "18": "IN", "19": "IA", "20": "KS", "21": "KY", "22": "LA", "23": "ME", "24": "MD",
    "25": "MA", "26": "MI", "27": "MN", "28": "MS", "29": "MO", "30": "MT", "31": "NE",
    "32": "NV", "33": "NH", "34": "NJ", "35": "NM", "36": "NY", "37": "NC", "38": "ND",
    "39": "OH", "40": "OK", "41": "OR", "42": "PA", "44": "RI", "45": "SC", "46": "SD",
    "47": "TN", "48": "TX", "49": "UT", "50": "VT", "51": "VA", "53": "WA", "54": "WV",
    "55": "WI", "56": "WY",
}


def decode_arcs(topo):
    sx, sy = topo["transform"]["scale"]
    tx, ty = topo["transform"]["translate"]
    arcs = []
    for arc in topo["arcs"]:
        x = y = 0
        pts = []
        for dx, dy in arc:
            x += dx
            y += dy
            pts.append((x * sx + tx, y * sy + ty))
        arcs.append(pts)
    return arcs


def ring_coords(arcs, indices):
    out = []
    for i in indices:
        pts = arcs[i] if i >= 0 else list(reversed(arcs[~i]))
        if out:
            pts = pts[1:]
        out.extend(pts)
    return out


def perp_dist(p, a, b):
    (x, y), (x1, y1), (x2, y2) = p, a, b
    dx, dy = x2 - x1, y2 - y1
    if dx == 0 and dy == 0:
        return math.hypot(x - x1, y - y1)
    t = ((x - x1) * dx + (y - y1) * dy) / (dx * dx + dy * dy)
    t = max(0.0, min(1.0, t))
    return math.hypot(x - (x1 + t * dx), y - (y1 + t * dy))


def simplify(pts, tol):
    if len(pts) < 3:
        return pts
    keep = [False] * len(pts)
    keep[0] = keep[-1] = True
    stack = [(0, len(pts) - 1)]
    while stack:
        s, e = stack.pop()
        best, idx = 0.0, None
        for i in range(s + 1, e):
            d = perp_dist(pts[i], pts[s], pts[e])
            if d > best:
                best, idx = d, i
        if idx is not None and best > tol:
            keep[idx] = True
            stack.append((s, idx))
            stack.append((idx, e))
    return [p for p, k in zip(pts, keep) if k]


def polygons_of(geom):
    if geom["type"] == "Polygon":
        return [geom["arcs"]]
    if geom["type"] == "MultiPolygon":
        return geom["arcs"]
    return []


def to_geojson_polygons(arcs, geom, tol, digits):
    polys = []
    for poly in polygons_of(geom):
        rings = []
        for ring_idx, ring in enumerate(poly):
            pts = simplify(ring_coords(arcs, ring), tol)
            pts = [[round(x, digits), round(y, digits)] for x, y in pts]
            dedup = [pts[0]]
            for p in pts[1:]:
                if p != dedup[-1]:
                    dedup.append(p)
            if dedup[0] != dedup[-1]:
                dedup.append(dedup[0])
            if len(dedup) >= 4:
                rings.append(dedup)
            elif ring_idx == 0:
                rings = None
                break
        if rings:
            polys.append(rings)
    return polys


def feature(fid, name, polys, kind=None):
    props = {"id": fid, "name": name}
    if kind:
        props["kind"] = kind
    geometry = (
        {"type": "Polygon", "coordinates": polys[0]}
        if len(polys) == 1
        else {"type": "MultiPolygon", "coordinates": polys}
    )
    return {"type": "Feature", "properties": props, "geometry": geometry}


def main():
    src, out = Path(sys.argv[1]), Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)

    states = json.loads((src / "states-albers-10m.json").read_text())
    arcs = decode_arcs(states)
    feats = []
    for g in states["objects"]["states"]["geometries"]:
        postal = FIPS_TO_POSTAL[g["id"]]
        feats.append(feature(postal, g["properties"]["name"], to_geojson_polygons(arcs, g, 0.6, 2)))
    feats.sort(key=lambda f: f["properties"]["id"])
    nation = states["objects"]["nation"]["geometries"][0]
    feats.append(feature("US", "United States", to_geojson_polygons(arcs, nation, 0.6, 2), "outline"))
    doc = {
        "type": "FeatureCollection",
        "name": "us-states-dc",
        "coordinate_system": "planar",
        "crs_note": "Albers equal-area conic, Alaska and Hawaii repositioned as insets; "
        "stylized and simplified from us-atlas states-albers-10m (U.S. Census Bureau cartographic boundaries).",
        "features": feats,
    }
    (out / "us-states-dc.geojson").write_text(json.dumps(doc, separators=(",", ":")) + "\n")

    counties = json.loads((src / "counties-albers-10m.json").read_text())
    arcs = decode_arcs(counties)
    feats = []
    for g in counties["objects"]["counties"]["geometries"]:
        if g["id"].startswith("36"):
            feats.append(feature(g["id"], g["properties"]["name"], to_geojson_polygons(arcs, g, 0.12, 3)))
    feats.sort(key=lambda f: f["properties"]["id"])
    ny = next(g for g in counties["objects"]["states"]["geometries"] if g["id"] == "36")
    feats.append(feature("36", "New York", to_geojson_polygons(arcs, ny, 0.12, 3), "outline"))
    doc = {
        "type": "FeatureCollection",
        "name": "ny-counties",
        "coordinate_system": "planar",
        "crs_note": "Albers equal-area conic; simplified from us-atlas counties-albers-10m "
        "(U.S. Census Bureau cartographic boundaries).",
        "features": feats,
    }
    (out / "ny-counties.geojson").write_text(json.dumps(doc, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()
