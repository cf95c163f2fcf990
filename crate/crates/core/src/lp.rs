//! Exact two-phase simplex on a fraction-free integer tableau.
//!
//! Rows are scaled to integers and every tableau entry is kept as an integer
//! multiple of the current basis determinant, so pivots need only integer
//! multiplication and exact division. Arithmetic runs in `i128` and restarts
//! in `BigInt` on overflow. Entering columns follow Dantzig's rule, switching
//! to Bland's rule while pivots are degenerate; leaving rows break ratio ties
//! by the smallest basic column.
//!
//! Problems are minimizations over nonnegative variables. The solver returns
//! an optimal vertex and the dual prices, and accepts new columns after a
//! solve, reoptimizing from the previous basis.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `minimize objective . x  s.t. constraints, x >= 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    /// One price per constraint: `>= 0` on `Ge` rows, `<= 0` on `Le` rows.
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_var(&mut self, cost: Rational) -> usize {
        self.objective.push(cost);
        self.objective.len() - 1
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> usize {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self.constraints.len() - 1
    }

    pub fn solve(&self) -> Result<LpSolution> {
        Solver::new(self.clone()).solve()
    }
}

/// Incremental solver: solve, add columns, solve again.
pub struct Solver {
    lp: LinearProgram,
    scaling: Scaling,
    state: Backend,
}

enum Backend {
    Small(Option<Tableau<i128>>),
    Big(Option<Tableau<BigInt>>),
}

struct Overflow;

type Step<T> = std::result::Result<T, StepError>;

enum StepError {
    Overflow,
    Lp(Error),
}

impl From<Overflow> for StepError {
    fn from(_: Overflow) -> Self {
        StepError::Overflow
    }
}

impl Solver {
    pub fn new(lp: LinearProgram) -> Self {
        let scaling = Scaling::of(&lp);
        Solver { lp, scaling, state: Backend::Small(None) }
    }

    pub fn program(&self) -> &LinearProgram {
        &self.lp
    }

    /// Appends a variable with the given cost and `(row, coefficient)`
    /// entries. Coefficients times the row's scale must be integral.
    pub fn add_column(&mut self, cost: Rational, entries: Vec<(usize, Rational)>) -> Result<usize> {
        let var = self.lp.add_var(cost.clone());
        for (row, a) in &entries {
            self.lp.constraints[*row].coeffs.push((var, a.clone()));
        }
        let col = self.scaling.column(&self.lp, &cost, &entries)?;
        let ok = match &mut self.state {
            Backend::Small(Some(t)) => t.add_column(var, &col.0, &col.1).is_ok(),
            Backend::Big(Some(t)) => t.add_column(var, &col.0, &col.1).is_ok(),
            _ => true,
        };
        if !ok {
            self.state = Backend::Big(None);
        }
        Ok(var)
    }

    pub fn solve(&mut self) -> Result<LpSolution> {
        if let Backend::Small(slot) = &mut self.state {
            let attempt = match slot.take() {
                Some(t) => Ok(t),
                None => Tableau::<i128>::build(&self.lp, &self.scaling).map_err(StepError::from),
            }
            .and_then(|mut t| t.run().map(|()| t));
            match attempt {
                Ok(t) => {
                    let sol = t.solution(&self.lp, &self.scaling);
                    self.state = Backend::Small(Some(t));
                    return Ok(sol);
                }
                Err(StepError::Lp(e)) => return Err(e),
                Err(StepError::Overflow) => self.state = Backend::Big(None),
            }
        }
        let Backend::Big(slot) = &mut self.state else { unreachable!() };
        let mut t = match slot.take() {
            Some(t) => t,
            None => Tableau::<BigInt>::build(&self.lp, &self.scaling).map_err(|_| Error::Internal("bigint overflow".into()))?,
        };
        match t.run() {
            Ok(()) => {}
            Err(StepError::Lp(e)) => return Err(e),
            Err(StepError::Overflow) => return Err(Error::Internal("bigint overflow".into())),
        }
        let sol = t.solution(&self.lp, &self.scaling);
        self.state = Backend::Big(Some(t));
        Ok(sol)
    }
}

/// Positive integer factors that clear the denominators of every row and
/// of the objective, plus the sign flip making each right-hand side
/// nonnegative.
struct Scaling {
    row: Vec<BigInt>,
    sign: Vec<i8>,
    objective: BigInt,
}

impl Scaling {
    fn of(lp: &LinearProgram) -> Scaling {
        let lcm = |acc: BigInt, q: &Rational| acc.lcm(q.denom());
        let row = lp
            .constraints
            .iter()
            .map(|c| c.coeffs.iter().map(|(_, a)| a).chain([&c.rhs]).fold(<BigInt as One>::one(), lcm))
            .collect();
        let sign = lp.constraints.iter().map(|c| if c.rhs.is_negative() { -1 } else { 1 }).collect();
        let objective = lp.objective.iter().fold(<BigInt as One>::one(), lcm);
        Scaling { row, sign, objective }
    }

    fn factor(&self, i: usize) -> BigInt {
        &self.row[i] * BigInt::from(self.sign[i])
    }

    fn integral(q: &Rational, factor: &BigInt) -> Result<BigInt> {
        let v = q * Rational::from_integer(factor.clone());
        if !v.is_integer() {
            return Err(Error::Internal("column coefficient does not fit the row scaling".into()));
        }
        Ok(v.to_integer())
    }

    /// Scaled integer cost and normalized row entries of a new column.
    fn column(&self, lp: &LinearProgram, cost: &Rational, entries: &[(usize, Rational)]) -> Result<(BigInt, Vec<(usize, BigInt)>)> {
        let _ = lp;
        let c = Scaling::integral(cost, &self.objective)?;
        let mut out = Vec::with_capacity(entries.len());
        for (i, a) in entries {
            out.push((*i, Scaling::integral(a, &self.factor(*i))?));
        }
        Ok((c, out))
    }

    fn relation(&self, lp: &LinearProgram, i: usize) -> Relation {
        match (lp.constraints[i].relation, self.sign[i] < 0) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (r, _) => r,
        }
    }
}

trait Exact: Clone + Ord + Debug {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> Ordering;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn neg(&self) -> Option<Self>;
}

impl Exact for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn signum(&self) -> Ordering {
        self.cmp(&0)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl Exact for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> Ordering {
        self.sign().cmp(&num_bigint::Sign::NoSign)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % o)));
        self / o
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

fn conv<T: Exact>(b: &BigInt) -> std::result::Result<T, Overflow> {
    T::from_big(b).ok_or(Overflow)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Var(usize),
    Slack,
    Artificial,
}

/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 30;

struct Tableau<T> {
    /// `D · B^-1 A`, row-major.
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    /// `D ·` reduced costs.
    obj: Vec<T>,
    /// `-D ·` objective value.
    obj_rhs: T,
    det: T,
    costs: Vec<T>,
    kinds: Vec<Kind>,
    basis: Vec<usize>,
    unit_col: Vec<usize>,
    pivots: usize,
}

impl<T: Exact> Tableau<T> {
    fn build(lp: &LinearProgram, sc: &Scaling) -> std::result::Result<Self, Overflow> {
        let m = lp.constraints.len();
        let n = lp.num_vars();
        let mut kinds: Vec<Kind> = (0..n).map(Kind::Var).collect();
        let mut costs = Vec::with_capacity(n);
        for c in &lp.objective {
            let v = (c * Rational::from_integer(sc.objective.clone())).to_integer();
            costs.push(conv::<T>(&v)?);
        }
        let mut rows = vec![vec![T::zero(); n]; m];
        let mut rhs = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            let f = Rational::from_integer(sc.factor(i));
            for (j, a) in &c.coeffs {
                let v = (a * &f).to_integer();
                rows[i][*j] = rows[i][*j].add(&conv::<T>(&v)?).ok_or(Overflow)?;
            }
            rhs.push(conv::<T>(&(&c.rhs * &f).to_integer())?);
        }
        let mut basis = vec![0; m];
        let mut unit_col = vec![0; m];
        let push_col = |rows: &mut Vec<Vec<T>>, kinds: &mut Vec<Kind>, costs: &mut Vec<T>, kind: Kind, i: usize, v: T| {
            for (r, row) in rows.iter_mut().enumerate() {
                row.push(if r == i { v.clone() } else { T::zero() });
            }
            kinds.push(kind);
            costs.push(T::zero());
            kinds.len() - 1
        };
        let one = T::one();
        let minus_one = one.neg().ok_or(Overflow)?;
        for i in 0..m {
            match sc.relation(lp, i) {
                Relation::Le => {
                    let s = push_col(&mut rows, &mut kinds, &mut costs, Kind::Slack, i, one.clone());
                    basis[i] = s;
                    unit_col[i] = s;
                }
                Relation::Ge => {
                    push_col(&mut rows, &mut kinds, &mut costs, Kind::Slack, i, minus_one.clone());
                    let a = push_col(&mut rows, &mut kinds, &mut costs, Kind::Artificial, i, one.clone());
                    basis[i] = a;
                    unit_col[i] = a;
                }
                Relation::Eq => {
                    let a = push_col(&mut rows, &mut kinds, &mut costs, Kind::Artificial, i, one.clone());
                    basis[i] = a;
                    unit_col[i] = a;
                }
            }
        }
        let width = kinds.len();
        Ok(Tableau {
            rows,
            rhs,
            obj: vec![T::zero(); width],
            obj_rhs: T::zero(),
            det: T::one(),
            costs,
            kinds,
            basis,
            unit_col,
            pivots: 0,
        })
    }

    fn width(&self) -> usize {
        self.kinds.len()
    }

    /// Objective row for the given per-column costs at the current basis.
    fn load_objective(&mut self, costs: &[T]) -> std::result::Result<(), Overflow> {
        let w = self.width();
        let mut obj = Vec::with_capacity(w);
        for c in costs {
            obj.push(self.det.mul(c).ok_or(Overflow)?);
        }
        let mut obj_rhs = T::zero();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    obj[j] = obj[j].sub(&cb.mul(a).ok_or(Overflow)?).ok_or(Overflow)?;
                }
            }
            obj_rhs = obj_rhs.sub(&cb.mul(&self.rhs[i]).ok_or(Overflow)?).ok_or(Overflow)?;
        }
        self.obj = obj;
        self.obj_rhs = obj_rhs;
        Ok(())
    }

    fn pivot(&mut self, r: usize, c: usize) -> std::result::Result<(), Overflow> {
        self.pivots += 1;
        let p = self.rows[r][c].clone();
        let d = self.det.clone();
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        let update = |x: &T, f: &T, y: &T| -> Option<T> { Some(x.mul(&p)?.sub(&f.mul(y)?)?.div_exact(&d)) };
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            let row = &mut self.rows[i];
            if f.is_zero() {
                for x in row.iter_mut() {
                    if !x.is_zero() {
                        *x = x.mul(&p).ok_or(Overflow)?.div_exact(&d);
                    }
                }
                self.rhs[i] = self.rhs[i].mul(&p).ok_or(Overflow)?.div_exact(&d);
            } else {
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = update(x, &f, y).ok_or(Overflow)?;
                }
                self.rhs[i] = update(&self.rhs[i], &f, &prhs).ok_or(Overflow)?;
            }
        }
        let f = self.obj[c].clone();
        for (x, y) in self.obj.iter_mut().zip(&prow) {
            *x = update(x, &f, y).ok_or(Overflow)?;
        }
        self.obj_rhs = update(&self.obj_rhs, &f, &prhs).ok_or(Overflow)?;
        self.det = p;
        self.basis[r] = c;
        if self.det.signum() == Ordering::Less {
            let neg = |x: &mut T| -> std::result::Result<(), Overflow> {
                *x = x.neg().ok_or(Overflow)?;
                Ok(())
            };
            for row in self.rows.iter_mut() {
                for x in row.iter_mut() {
                    neg(x)?;
                }
            }
            for x in self.rhs.iter_mut() {
                neg(x)?;
            }
            for x in self.obj.iter_mut() {
                neg(x)?;
            }
            neg(&mut self.obj_rhs)?;
            neg(&mut self.det)?;
        }
        Ok(())
    }

    fn enterable(&self, j: usize) -> bool {
        self.kinds[j] != Kind::Artificial && self.obj[j].signum() == Ordering::Less
    }

    fn optimize(&mut self) -> Step<()> {
        let mut degenerate = 0;
        loop {
            let col = if degenerate >= DEGENERATE_STREAK {
                (0..self.width()).find(|&j| self.enterable(j))
            } else {
                (0..self.width()).filter(|&j| self.enterable(j)).min_by(|&a, &b| self.obj[a].cmp(&self.obj[b]))
            };
            let Some(col) = col else {
                return Ok(());
            };
            let mut best: Option<usize> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col].signum() != Ordering::Greater {
                    continue;
                }
                best = Some(match best {
                    None => i,
                    Some(b) => {
                        // rhs[i] / a[i] vs rhs[b] / a[b], both denominators positive.
                        let lhs = self.rhs[i].mul(&self.rows[b][col]).ok_or(Overflow)?;
                        let rhs = self.rhs[b].mul(&self.rows[i][col]).ok_or(Overflow)?;
                        match lhs.cmp(&rhs) {
                            Ordering::Less => i,
                            Ordering::Equal if self.basis[i] < self.basis[b] => i,
                            _ => b,
                        }
                    }
                });
            }
            let Some(row) = best else {
                return Err(StepError::Lp(Error::Unbounded));
            };
            if self.rhs[row].is_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, col)?;
        }
    }

    fn run(&mut self) -> Step<()> {
        let has_artificial = self.kinds.contains(&Kind::Artificial);
        let phase1_done = self.basis.iter().all(|&b| self.kinds[b] != Kind::Artificial) || self.pivots > 0;
        if has_artificial && !phase1_done {
            let phase1: Vec<T> = self
                .kinds
                .iter()
                .map(|k| if *k == Kind::Artificial { T::one() } else { T::zero() })
                .collect();
            self.load_objective(&phase1)?;
            self.optimize()?;
            if self.obj_rhs.signum() == Ordering::Less {
                return Err(StepError::Lp(Error::Infeasible));
            }
            for r in 0..self.rows.len() {
                if self.kinds[self.basis[r]] != Kind::Artificial {
                    continue;
                }
                if let Some(c) = (0..self.width()).find(|&j| self.kinds[j] != Kind::Artificial && !self.rows[r][j].is_zero()) {
                    self.pivot(r, c)?;
                }
            }
        }
        let costs = self.costs.clone();
        self.load_objective(&costs)?;
        self.optimize()
    }

    fn add_column(&mut self, var: usize, cost: &BigInt, entries: &[(usize, BigInt)]) -> std::result::Result<(), Overflow> {
        let c = conv::<T>(cost)?;
        let mut col = vec![T::zero(); self.rows.len()];
        let mut obj = self.det.mul(&c).ok_or(Overflow)?;
        for (k, a) in entries {
            let a = conv::<T>(a)?;
            let u = self.unit_col[*k];
            for (i, x) in col.iter_mut().enumerate() {
                let t = &self.rows[i][u];
                if !t.is_zero() {
                    *x = x.add(&t.mul(&a).ok_or(Overflow)?).ok_or(Overflow)?;
                }
            }
            obj = obj.add(&self.obj[u].mul(&a).ok_or(Overflow)?).ok_or(Overflow)?;
        }
        for (row, x) in self.rows.iter_mut().zip(col) {
            row.push(x);
        }
        self.obj.push(obj);
        self.costs.push(c);
        self.kinds.push(Kind::Var(var));
        Ok(())
    }

    fn solution(&self, lp: &LinearProgram, sc: &Scaling) -> LpSolution {
        let det = Rational::from_integer(self.det.to_big());
        let obj_scale = Rational::from_integer(sc.objective.clone());
        let mut primal = vec![Rational::zero(); lp.num_vars()];
        for (i, &b) in self.basis.iter().enumerate() {
            if let Kind::Var(v) = self.kinds[b] {
                primal[v] = Rational::from_integer(self.rhs[i].to_big()) / &det;
            }
        }
        let value = -Rational::from_integer(self.obj_rhs.to_big()) / &det / &obj_scale;
        let dual = (0..self.rows.len())
            .map(|i| {
                let y = -Rational::from_integer(self.obj[self.unit_col[i]].to_big()) / &det;
                y * Rational::from_integer(sc.factor(i)) / &obj_scale
            })
            .collect();
        LpSolution { value, primal, dual, pivots: self.pivots }
    }
}
