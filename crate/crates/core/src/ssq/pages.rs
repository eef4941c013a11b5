//! Windowed page homology.
//!
//! A cell is a bidegree `(degree, filtration)`; its `E1` basis is finite
//! because the `sigma`-exponent is fixed by the bidegree. Each page keeps
//! per cell the cycle lattice `Z_r` and boundary lattice `B_r` inside `E1`,
//! with `E_r = Z_r / B_r`. A cell whose differentials reach outside the
//! window is marked indeterminate from that page on.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::{self, pow2, Vector, Q};
use super::{Degree, PageElement, SsqError, SsqMonomial, DIFFERENTIAL_PAGES};
use crate::coeffring::Scalar;

/// Bounds of the computed region: `|sigma exponent| <= kmax`,
/// `|integral degree| <= kmax`, filtration `<= filtration_max`, and only
/// cells whose whole basis has `u2`-exponent `<= u2_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub kmax: u32,
    pub filtration_max: u32,
    pub u2_max: u32,
}

impl Default for Window {
    fn default() -> Self {
        Window { kmax: 48, filtration_max: 16, u2_max: 8 }
    }
}

/// `sigma`-exponent of the monomials in a bidegree, if the bidegree has any.
fn cell_sigma(degree: Degree, filtration: u32) -> Option<i64> {
    let twice = filtration as i64 - degree.l + degree.k;
    (twice.rem_euclid(2) == 0 && twice / 2 >= degree.k).then_some(twice / 2)
}

/// Full `E1` basis of a bidegree, ordered by `u2`-exponent.
fn cell_basis(degree: Degree, filtration: u32) -> Vec<SsqMonomial> {
    let Some(s) = cell_sigma(degree, filtration) else { return Vec::new() };
    let rest = (s - degree.k) as u32;
    (0..=rest / 3).map(|m| SsqMonomial::new(filtration, s, rest - 3 * m, m)).collect()
}

fn vanishes(r: u32, sigma: i64) -> bool {
    SsqMonomial::new(0, sigma, 0, 0).differential(r).is_none()
}

impl Window {
    fn validate(&self) -> Result<(), SsqError> {
        if self.kmax == 0 {
            return Err(SsqError::WindowTooSmall("kmax must be positive".into()));
        }
        Ok(())
    }

    /// Bidegrees of the window in a fixed order.
    pub fn cells(&self) -> Vec<(Degree, u32)> {
        let kmax = self.kmax as i64;
        let span = 3 * self.u2_max as i64 + 2;
        let mut out = Vec::new();
        for j in 0..=self.filtration_max {
            for s in -kmax..=kmax {
                for n in (s - span).max(-kmax)..=s.min(kmax) {
                    out.push((Degree::new(n, j as i64 - 2 * s + n), j));
                }
            }
        }
        out
    }

    /// Every `E1` basis monomial in the window.
    pub fn basis(&self) -> Vec<SsqMonomial> {
        self.cells().into_iter().flat_map(|(d, j)| cell_basis(d, j)).collect()
    }

    /// `d_r o d_r = 0` on every window basis monomial; returns the number
    /// checked.
    pub fn check_d_squared(&self, r: u32) -> Result<usize, SsqError> {
        let basis = self.basis();
        for m in &basis {
            let e = PageElement::monomial(Scalar::one(), *m);
            let dd = super::d_r(r, &super::d_r(r, &e)?)?;
            if !dd.is_zero() {
                return Err(SsqError::DSquaredNonzero { r, element: m.to_string() });
            }
        }
        Ok(basis.len())
    }
}

#[derive(Clone, Debug)]
struct Cell {
    degree: Degree,
    filtration: u32,
    sigma: i64,
    basis: Vec<SsqMonomial>,
}

#[derive(Clone, Debug)]
struct CellState {
    z: Vec<Vector>,
    b: Vec<Vector>,
    determinate: bool,
}

/// Status of an element's class on a page.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassStatus {
    /// Not a cycle for the differentials before this page.
    NotCycle,
    /// A boundary: the class is zero.
    Zero,
    /// Nonzero of order `2^e`.
    Torsion(u32),
    Free,
    Indeterminate,
    OutsideWindow,
}

impl ClassStatus {
    pub fn is_nonzero_class(&self) -> bool {
        matches!(self, ClassStatus::Torsion(_) | ClassStatus::Free)
    }
}

/// A generator of a cell of a page, with order `Some(e)` for `Z/2^e` and
/// `None` for `Z_(2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub element: String,
    pub e1_form: String,
    pub order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellPresentation {
    pub degree: Degree,
    pub filtration: u32,
    pub determinate: bool,
    pub generators: Vec<Generator>,
}

/// All nonzero or indeterminate cells of one page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PagePresentation {
    pub page: u32,
    pub window: Window,
    pub cells: Vec<CellPresentation>,
}

/// A generator of a page cell with its order, as in [`Generator`].
pub type ClassGenerator = (PageElement, Option<u32>);

/// `E_1`, `E_2 = E_3`, `E_4 = ... = E_7` and `E_8 = E_infinity` over a window.
pub struct Pages {
    window: Window,
    cells: Vec<Cell>,
    index: HashMap<(Degree, u32), usize>,
    states: Vec<Vec<CellState>>,
}

fn identity(n: usize) -> Vec<Vector> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

/// Scale by a 2-adic unit so the entries are coprime integers with a
/// positive leading entry.
fn normalize(v: &[Q]) -> Vector {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from(den.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    while !g.is_zero() && g.is_even() {
        g >>= 1;
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let lead_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if lead_neg { -g } else { g };
    ints.into_iter().map(|x| Q::from(x / &g)).collect()
}

impl Pages {
    /// Run every differential over the window.
    pub fn compute(window: &Window) -> Result<Pages, SsqError> {
        window.validate()?;
        let cells: Vec<Cell> = window
            .cells()
            .into_iter()
            .map(|(degree, filtration)| Cell {
                degree,
                filtration,
                sigma: cell_sigma(degree, filtration).expect("window cells are nonempty"),
                basis: cell_basis(degree, filtration),
            })
            .collect();
        let index = cells.iter().enumerate().map(|(i, c)| ((c.degree, c.filtration), i)).collect();
        let first: Vec<CellState> = cells
            .iter()
            .map(|c| CellState { z: identity(c.basis.len()), b: Vec::new(), determinate: true })
            .collect();
        let mut pages = Pages { window: *window, cells, index, states: vec![first] };
        for r in DIFFERENTIAL_PAGES {
            let next = pages.step(r);
            pages.states.push(next);
        }
        Ok(pages)
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    fn target(&self, r: u32, c: &Cell) -> Option<usize> {
        let d = Degree::new(c.degree.k + 1, c.degree.l);
        self.index.get(&(d, c.filtration + r)).copied()
    }

    /// `d_r` of a vector of cell `c`, in the basis of the target cell.
    fn image(&self, r: u32, c: &Cell, t: &Cell, v: &[Q]) -> Vector {
        let mut out = vec![Q::zero(); t.basis.len()];
        for (x, m) in v.iter().zip(&c.basis) {
            if x.is_zero() {
                continue;
            }
            if let Some((f, tm)) = m.differential(r) {
                let pos = t.basis.iter().position(|b| *b == tm).expect("target in cell basis");
                out[pos] += x * Q::from(BigInt::from(f));
            }
        }
        out
    }

    fn step(&self, r: u32) -> Vec<CellState> {
        let prev = self.states.last().expect("initial page");
        // images of the current cycles, per source cell
        let images: Vec<Option<Vec<Vector>>> = self
            .cells
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                if vanishes(r, c.sigma) {
                    return None;
                }
                let t = &self.cells[self.target(r, c)?];
                Some(prev[i].z.iter().map(|v| self.image(r, c, t, v)).collect())
            })
            .collect();
        self.cells
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                let st = &prev[i];
                let mut determinate = st.determinate;
                let z = if vanishes(r, c.sigma) {
                    st.z.clone()
                } else {
                    match (self.target(r, c), &images[i]) {
                        (Some(t), Some(img)) if prev[t].determinate => {
                            let mut rows = img.clone();
                            rows.extend(prev[t].b.iter().cloned());
                            let dim = self.cells[t].basis.len();
                            let ker: Vec<Vector> = lattice::left_kernel(&rows, dim)
                                .into_iter()
                                .map(|k| lattice::combine(&k[..st.z.len()], &st.z, c.basis.len()))
                                .collect();
                            lattice::echelon(&ker, c.basis.len())
                        }
                        _ => {
                            determinate = false;
                            st.z.clone()
                        }
                    }
                };
                let mut b = st.b.clone();
                if c.filtration >= r {
                    let sd = Degree::new(c.degree.k - 1, c.degree.l);
                    let sj = c.filtration - r;
                    let source_basis = cell_basis(sd, sj);
                    let live = source_basis.first().is_some_and(|m| !vanishes(r, m.sigma));
                    if live {
                        match self.index.get(&(sd, sj)) {
                            Some(&s) if prev[s].determinate => {
                                if let Some(img) = &images[s] {
                                    b.extend(img.iter().cloned());
                                    b = lattice::echelon(&b, c.basis.len());
                                }
                            }
                            _ => determinate = false,
                        }
                    }
                }
                CellState { z, b, determinate }
            })
            .collect()
    }

    fn slot(page: u32) -> Result<usize, SsqError> {
        match page {
            0 => Err(SsqError::MalformedElement("pages start at 1".into())),
            1 => Ok(0),
            2..=3 => Ok(1),
            4..=7 => Ok(2),
            _ => Ok(3),
        }
    }

    fn vector_of(&self, e: &PageElement) -> Result<Option<(usize, Vector)>, SsqError> {
        let Some((degree, filtration)) = e.bidegree()? else { return Ok(None) };
        let Some(&i) = self.index.get(&(degree, filtration)) else {
            return Ok(Some((usize::MAX, Vec::new())));
        };
        let basis = &self.cells[i].basis;
        let mut v = vec![Q::zero(); basis.len()];
        for (m, c) in e.terms() {
            let q = c
                .to_rational()
                .ok_or_else(|| SsqError::MalformedElement(format!("coefficient {c} is not rational")))?;
            if !lattice::is_two_integral(&q) {
                return Err(SsqError::MalformedElement(format!("coefficient {c} is not 2-local")));
            }
            let pos = basis.iter().position(|b| b == m).expect("same bidegree");
            v[pos] = q;
        }
        Ok(Some((i, v)))
    }

    /// The class of `e` on page `page` (`page >= 8` is `E_infinity`).
    pub fn class_status(&self, page: u32, e: &PageElement) -> Result<ClassStatus, SsqError> {
        let slot = Self::slot(page)?;
        let Some((i, x)) = self.vector_of(e)? else { return Ok(ClassStatus::Zero) };
        if i == usize::MAX {
            return Ok(ClassStatus::OutsideWindow);
        }
        let st = &self.states[slot][i];
        if !st.determinate {
            return Ok(ClassStatus::Indeterminate);
        }
        if !lattice::contains(&st.z, &x) {
            return Ok(ClassStatus::NotCycle);
        }
        if lattice::contains(&st.b, &x) {
            return Ok(ClassStatus::Zero);
        }
        let dim = x.len();
        let mut with_x = st.b.clone();
        with_x.push(x.clone());
        if lattice::echelon(&with_x, dim).len() > st.b.len() {
            return Ok(ClassStatus::Free);
        }
        let mut e = 1;
        loop {
            let y: Vector = x.iter().map(|c| c * pow2(e)).collect();
            if lattice::contains(&st.b, &y) {
                return Ok(ClassStatus::Torsion(e));
            }
            e += 1;
        }
    }

    fn element_of(&self, i: usize, v: &[Q]) -> PageElement {
        let mut e = PageElement::zero();
        for (x, m) in v.iter().zip(&self.cells[i].basis) {
            if !x.is_zero() {
                let c = Scalar::two_local_from(x.clone()).expect("2-local coordinates");
                let c = match c.to_integer() {
                    Some(n) => Scalar::from(n),
                    None => c,
                };
                e.add_term(*m, &c);
            }
        }
        e
    }

    fn generators_of(&self, slot: usize, i: usize) -> Vec<(PageElement, Option<u32>)> {
        let st = &self.states[slot][i];
        lattice::quotient(&st.z, &st.b)
            .into_iter()
            .map(|(v, order)| (self.element_of(i, &normalize(&v)), order))
            .collect()
    }

    fn present(&self, slot: usize, i: usize) -> CellPresentation {
        let c = &self.cells[i];
        let st = &self.states[slot][i];
        let generators = if st.determinate {
            self.generators_of(slot, i)
                .into_iter()
                .map(|(e, order)| Generator { element: e.to_string(), e1_form: e.e1_form(), order })
                .collect()
        } else {
            Vec::new()
        };
        CellPresentation {
            degree: c.degree,
            filtration: c.filtration,
            determinate: st.determinate,
            generators,
        }
    }

    /// Generators of a determinate cell with their orders; `None` outside
    /// the window or for an indeterminate cell.
    pub fn generators(
        &self,
        page: u32,
        degree: Degree,
        filtration: u32,
    ) -> Result<Option<Vec<ClassGenerator>>, SsqError> {
        let slot = Self::slot(page)?;
        Ok(self
            .index
            .get(&(degree, filtration))
            .filter(|&&i| self.states[slot][i].determinate)
            .map(|&i| self.generators_of(slot, i)))
    }

    /// A single cell of a page; `None` outside the window.
    pub fn cell(
        &self,
        page: u32,
        degree: Degree,
        filtration: u32,
    ) -> Result<Option<CellPresentation>, SsqError> {
        let slot = Self::slot(page)?;
        Ok(self.index.get(&(degree, filtration)).map(|&i| self.present(slot, i)))
    }

    /// Nonzero or indeterminate cells of a page, optionally only integral
    /// degrees.
    pub fn presentation(&self, page: u32, integral_only: bool) -> Result<PagePresentation, SsqError> {
        let slot = Self::slot(page)?;
        let cells = (0..self.cells.len())
            .into_par_iter()
            .filter(|&i| !integral_only || self.cells[i].degree.is_integral())
            .map(|i| self.present(slot, i))
            .filter(|p| !p.determinate || !p.generators.is_empty())
            .collect();
        Ok(PagePresentation { page, window: self.window, cells })
    }
}

/// `E_{r+1}` over the window after the differential `d_r`.
pub fn page_homology(r: u32, w: &Window) -> Result<PagePresentation, SsqError> {
    if r == 0 {
        return Err(SsqError::MalformedElement("differentials start at d1".into()));
    }
    if w.filtration_max < r && DIFFERENTIAL_PAGES.contains(&r) {
        return Err(SsqError::WindowTooSmall(format!(
            "filtration bound {} cannot hold d{r}",
            w.filtration_max
        )));
    }
    Pages::compute(w)?.presentation(r + 1, false)
}

/// `E_infinity` in integral degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub window: Window,
    pub cells: Vec<ChartCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartCell {
    /// Homotopy degree: minus the integral cohomological degree.
    pub stem: i64,
    pub filtration: u32,
    pub determinate: bool,
    pub generators: Vec<Generator>,
}

pub fn e_infinity_chart(w: &Window) -> Result<Chart, SsqError> {
    if w.filtration_max < 7 || w.kmax < 4 {
        return Err(SsqError::WindowTooSmall(format!(
            "need filtration >= 7 and kmax >= 4 to hold d7 on sigma^-4, got {} and {}",
            w.filtration_max, w.kmax
        )));
    }
    let pages = Pages::compute(w)?;
    let mut cells: Vec<ChartCell> = pages
        .presentation(8, true)?
        .cells
        .into_iter()
        .map(|c| ChartCell {
            stem: -c.degree.k,
            filtration: c.filtration,
            determinate: c.determinate,
            generators: c.generators,
        })
        .collect();
    cells.sort_by_key(|c| (c.stem, c.filtration));
    Ok(Chart { window: *w, cells })
}

impl Chart {
    /// Stems left to right, filtration bottom to top. `O` one free class,
    /// `x` one class of order 2, a digit for several classes, `?`
    /// indeterminate.
    pub fn to_ascii(&self) -> String {
        let kmax = self.window.kmax as i64;
        let mut grid: HashMap<(i64, u32), char> = HashMap::new();
        for c in &self.cells {
            let ch = if !c.determinate {
                '?'
            } else {
                match c.generators.as_slice() {
                    [g] if g.order.is_none() => 'O',
                    [g] if g.order == Some(1) => 'x',
                    gs if gs.len() <= 9 => char::from_digit(gs.len() as u32, 10).unwrap(),
                    _ => '+',
                }
            };
            grid.insert((c.stem, c.filtration), ch);
        }
        let mut out = String::new();
        for j in (0..=self.window.filtration_max).rev() {
            let _ = write!(out, "{j:>3} |");
            for t in -kmax..=kmax {
                out.push(*grid.get(&(t, j)).unwrap_or(&'.'));
            }
            out.push('\n');
        }
        out.push_str("    +");
        out.push_str(&"-".repeat((2 * kmax + 1) as usize));
        out.push('\n');
        out.push_str("     ");
        let mut t = -kmax;
        while t <= kmax {
            if t % 8 == 0 {
                let label = t.to_string();
                out.push_str(&label);
                t += label.len() as i64;
            } else {
                out.push(' ');
                t += 1;
            }
        }
        out.push('\n');
        out.push_str(
            "stem = homotopy degree; O free, x order 2, digit = number of classes, ? indeterminate\n",
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Window {
        Window { kmax: 12, filtration_max: 9, u2_max: 2 }
    }

    #[test]
    fn basis_of_a_cell() {
        // degree -6 (i.e. a1^3 or a3 up to sigma powers) at filtration 0
        let b = cell_basis(Degree::new(-6, 0), 0);
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|m| m.degree() == Degree::new(-6, 0)));
    }

    #[test]
    fn a_has_order_two_on_e2() {
        let p = Pages::compute(&small()).unwrap();
        assert_eq!(p.class_status(1, &PageElement::a()).unwrap(), ClassStatus::Free);
        assert_eq!(p.class_status(2, &PageElement::a()).unwrap(), ClassStatus::Torsion(1));
        assert_eq!(p.class_status(2, &PageElement::sigma(-1)).unwrap(), ClassStatus::NotCycle);
        assert_eq!(p.class_status(2, &PageElement::sigma(-2)).unwrap(), ClassStatus::Free);
        // sigma^-2 supports d3; twice it survives
        assert_eq!(p.class_status(4, &PageElement::sigma(-2)).unwrap(), ClassStatus::NotCycle);
        let two = PageElement::sigma(-2).scale(&Scalar::int(2));
        assert_eq!(p.class_status(4, &two).unwrap(), ClassStatus::Free);
        let hit = PageElement::u1().mul(&PageElement::a().mul(&PageElement::a()).mul(&PageElement::a()));
        assert_eq!(p.class_status(2, &hit).unwrap(), ClassStatus::Torsion(1));
        assert_eq!(p.class_status(4, &hit).unwrap(), ClassStatus::Zero);
    }

    #[test]
    fn unit_survives() {
        let p = Pages::compute(&small()).unwrap();
        assert_eq!(p.class_status(8, &PageElement::one()).unwrap(), ClassStatus::Free);
        let c = p.cell(8, Degree::ZERO, 0).unwrap().unwrap();
        assert!(c.generators.iter().any(|g| g.element == "1"));
    }

    #[test]
    fn d_squared_vanishes() {
        for r in DIFFERENTIAL_PAGES {
            assert!(small().check_d_squared(r).unwrap() > 0);
        }
    }

    #[test]
    fn small_windows_rejected() {
        let w = Window { kmax: 12, filtration_max: 5, u2_max: 2 };
        assert!(matches!(e_infinity_chart(&w), Err(SsqError::WindowTooSmall(_))));
    }
}
