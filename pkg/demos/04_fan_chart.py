"""
A density-forecast fan chart
============================

Eight quarterly forecasts with widening, increasingly right-skewed
uncertainty.  Bands at 30, 60 and 90 percent coverage are written as CSV
and drawn as nested translucent polygons in an SVG file.
"""
from pathlib import Path

from twopiece import band, build_bandtable, interval_probability, render, TwoPieceNormal
from twopiece.fanchart import HIGHEST_DENSITY, fan_chart

rows = []
for h in range(1, 9):
    s = 0.4 + 0.15 * h
    rows.append((f"Q{h}", 2.0 + 0.05 * h, s * (1.0 - 0.03 * h), s * (1.0 + 0.05 * h)))

# The highest-density band puts k sigma on each side of the mode and always
# holds mass 2 Phi(k) - 1, whatever the two scales are.
d = TwoPieceNormal(0, 1, 2)
lo, hi = band(d, 0.9, HIGHEST_DENSITY)
print(f"90% highest-density band for (0, 1, 2): ({lo:.6f}, {hi:.6f}), mass {interval_probability(d, lo, hi):.12f}")

for mode in ("equal-tail", HIGHEST_DENSITY):
    svg, csv_text = render(build_bandtable(fan_chart(rows, (0.3, 0.6, 0.9), mode)))
    out = Path(f"fan_{mode}.svg")
    out.write_text(svg, encoding="utf-8")
    print(f"wrote {out} ({len(svg)} bytes)")
    print(csv_text.splitlines()[0])
    print(csv_text.splitlines()[-1])
