import xml.etree.ElementTree as ET

from mobius_sense.svgplot import scatter_svg

NS = "{http://www.w3.org/2000/svg}"


def circles(svg):
    return ET.fromstring(svg).findall(f"{NS}circle")


def test_parses_and_counts():
    svg = scatter_svg([(1, 1), (2, 10)], [(1, 100)], xlog=False, title="a<b")
    assert len(circles(svg)) == 3
    assert "a&lt;b" in svg


def test_deterministic():
    pts = [(10.0**i, 2.0**i) for i in range(5)]
    assert scatter_svg(pts, xlog=True) == scatter_svg(pts, xlog=True)


def test_skips_bad_points():
    svg = scatter_svg([(1, 0), (1, float("nan")), (1, float("inf")), (2, 3)], ylog=True)
    assert len(circles(svg)) == 1


def test_log_ticks():
    svg = scatter_svg([(1, 1e-3), (2, 1e4)], ylog=True)
    assert "1e-3" in svg and "1e4" in svg


def test_points_inside_frame():
    svg = scatter_svg([(0, 1), (5, 1e6)], [(5, 1e7)], ylog=True, bound_line=True)
    for c in circles(svg):
        assert 0 <= float(c.get("cx")) <= 640 and 0 <= float(c.get("cy")) <= 440


def test_empty():
    ET.fromstring(scatter_svg([]))
