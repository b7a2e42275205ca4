/// A potential depending on two consecutive symbols, `phi(x) = v(x_0, x_1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Potential2 {
    v: [[f64; 2]; 2],
}

impl Potential2 {
    /// Table with `v[a][b]` the value on the cylinder `[ab]`.
    pub fn new(v: [[f64; 2]; 2]) -> Potential2 {
        assert!(v.iter().flatten().all(|x| x.is_finite()), "potential values must be finite");
        Potential2 { v }
    }

    /// `a00 * 1[00] + a01 * 1[01] + a1 * 1[1]`.
    pub fn family(a00: f64, a01: f64, a1: f64) -> Potential2 {
        Potential2::new([[a00, a01], [a1, a1]])
    }

    /// The indicator of the cylinder `[1]`.
    pub fn indicator_one() -> Potential2 {
        Potential2::family(0.0, 0.0, 1.0)
    }

    pub fn constant(c: f64) -> Potential2 {
        Potential2::family(c, c, c)
    }

    pub fn value(&self, a: bool, b: bool) -> f64 {
        self.v[a as usize][b as usize]
    }

    pub fn table(&self) -> [[f64; 2]; 2] {
        self.v
    }

    /// `sup phi` over the cylinder `[s]`.
    pub fn sup_on(&self, s: bool) -> f64 {
        let row = self.v[s as usize];
        row[0].max(row[1])
    }

    /// `Var phi([s]) = sup - inf` over the cylinder `[s]`.
    pub fn var_on(&self, s: bool) -> f64 {
        let row = self.v[s as usize];
        (row[0] - row[1]).abs()
    }

    /// `|phi| = max |v|`.
    pub fn norm(&self) -> f64 {
        self.v.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn add_constant(&self, c: f64) -> Potential2 {
        let mut v = self.v;
        v.iter_mut().flatten().for_each(|x| *x += c);
        Potential2::new(v)
    }

    /// `(a00, a01, a1)` when the potential belongs to the three-parameter
    /// family, i.e. does not depend on the second symbol after a one.
    pub fn as_family(&self) -> Option<(f64, f64, f64)> {
        (self.v[1][0] == self.v[1][1]).then_some((self.v[0][0], self.v[0][1], self.v[1][0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_statistics() {
        let phi = Potential2::family(0.5, -1.0, 2.0);
        assert_eq!(phi.sup_on(false), 0.5);
        assert_eq!(phi.var_on(false), 1.5);
        assert_eq!(phi.var_on(true), 0.0);
        assert_eq!(phi.sup_on(true), 2.0);
        assert_eq!(phi.norm(), 2.0);
        assert_eq!(phi.as_family(), Some((0.5, -1.0, 2.0)));
        assert_eq!(Potential2::new([[0.0, 0.0], [1.0, 0.0]]).as_family(), None);
        assert_eq!(phi.add_constant(1.0).as_family(), Some((1.5, 0.0, 3.0)));
    }
}
