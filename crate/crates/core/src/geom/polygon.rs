use super::{distance_point_segment, intersect_segment_segment, GeomError, Point, Segment, EPS_GEOM};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A simple polygon with counter-clockwise vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates and normalizes a vertex ring. Consecutive duplicates (and a
    /// closing vertex equal to the first) are dropped; clockwise input is
    /// reversed.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::DegeneratePolygon("non-finite coordinate".into()));
        }
        let mut vs: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if vs.last().map_or(true, |q: &Point| !q.approx_eq(p, EPS_GEOM)) {
                vs.push(p);
            }
        }
        while vs.len() > 1 && vs[0].approx_eq(*vs.last().unwrap(), EPS_GEOM) {
            vs.pop();
        }
        if vs.len() < 3 {
            return Err(GeomError::DegeneratePolygon(format!(
                "need at least 3 distinct vertices, got {}",
                vs.len()
            )));
        }
        let n = vs.len();
        for i in 0..n {
            for j in i + 1..n {
                if vs[i].approx_eq(vs[j], EPS_GEOM) {
                    return Err(GeomError::DegeneratePolygon(format!(
                        "repeated vertex {i} and {j}"
                    )));
                }
            }
        }
        let mut poly = Polygon { vertices: vs };
        let area = poly.signed_area();
        if area.abs() <= EPS_GEOM {
            return Err(GeomError::DegeneratePolygon("zero area".into()));
        }
        poly.check_simple()?;
        if area < 0.0 {
            poly.vertices.reverse();
        }
        Ok(poly)
    }

    fn check_simple(&self) -> Result<(), GeomError> {
        let edges: Vec<Segment> = self.edges().collect();
        let n = edges.len();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let hits = intersect_segment_segment(&edges[i], &edges[j]);
                if adjacent {
                    // Neighbours share exactly one vertex; anything more is
                    // a fold-back.
                    let shared = if j == i + 1 { edges[i].b } else { edges[i].a };
                    if hits.iter().any(|p| !p.approx_eq(shared, EPS_GEOM)) {
                        return Err(GeomError::DegeneratePolygon(format!(
                            "edges {i} and {j} overlap"
                        )));
                    }
                    let far = if j == i + 1 { edges[j].b } else { edges[j].a };
                    let other = if j == i + 1 { edges[i].a } else { edges[i].b };
                    if distance_point_segment(far, &edges[i]) <= EPS_GEOM
                        || distance_point_segment(other, &edges[j]) <= EPS_GEOM
                    {
                        return Err(GeomError::DegeneratePolygon(format!(
                            "edges {i} and {j} fold back"
                        )));
                    }
                } else if !hits.is_empty() {
                    return Err(GeomError::DegeneratePolygon(format!(
                        "edges {i} and {j} intersect"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Segment {
        let n = self.vertices.len();
        Segment::new(self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    /// Whether vertex `i` is reflex (interior angle above π).
    pub fn is_reflex(&self, i: usize) -> bool {
        let n = self.vertices.len();
        let prev = self.vertices[(i + n - 1) % n];
        let cur = self.vertices[i];
        let next = self.vertices[(i + 1) % n];
        (cur - prev).cross(next - cur) < 0.0
    }

    /// Minimum distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|e| distance_point_segment(p, &e))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = lo;
        for v in &self.vertices {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }
}

/// Crossing-number point location with an `EPS_GEOM` boundary band.
pub fn point_in_polygon(p: Point, poly: &Polygon) -> Location {
    if poly.boundary_distance(p) <= EPS_GEOM {
        return Location::Boundary;
    }
    let vs = poly.vertices();
    let n = vs.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (vs[i], vs[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}
