//! Finite groups given by Cayley tables, their conjugacy classes, class
//! functions and character tables, and expectations of class functions over
//! uniform homomorphisms from graph fundamental groups.

mod expect;
mod io;
mod table;

pub use expect::{cyclic_expectation_closed_form, graph_expectation, ClassHistogram, PathLoad, DEFAULT_GROUP_MUL_BUDGET};
pub use io::{load_group, GroupFile};
pub use table::{GroupTable, MAX_PERM_ORDER};

use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, Rational};

/// A conjugacy class; `rep` is its smallest element id.
#[derive(Clone, Debug)]
pub struct ConjClass {
    pub rep: u32,
    pub members: Vec<u32>,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Values on conjugacy classes, in class order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<Cyclo>,
}

impl ClassFunction {
    pub fn new(values: Vec<Cyclo>) -> ClassFunction {
        ClassFunction { values }
    }

    pub fn at(&self, class: usize) -> &Cyclo {
        &self.values[class]
    }

    pub fn conj(&self) -> ClassFunction {
        ClassFunction::new(self.values.iter().map(|v| v.conj()).collect())
    }

    pub fn mul(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction::new(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect())
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction::new(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &Cyclo) -> ClassFunction {
        ClassFunction::new(self.values.iter().map(|v| v * c).collect())
    }
}

/// Irreducible characters; row 0 is the trivial character.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub rows: Vec<ClassFunction>,
    pub names: Vec<String>,
}

/// A finite group with its classes and (optionally) character table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub table: GroupTable,
    pub classes: Vec<ConjClass>,
    class_of: Vec<usize>,
    /// Ambient cyclotomic conductor for character values (the exponent).
    pub conductor: u32,
    chars: Option<CharacterTable>,
}

impl FiniteGroup {
    pub fn from_table(table: GroupTable) -> FiniteGroup {
        let m = table.order;
        let mut class_of = vec![usize::MAX; m];
        let mut classes = Vec::new();
        for x in 0..m as u32 {
            if class_of[x as usize] != usize::MAX {
                continue;
            }
            let mut members: Vec<u32> = (0..m as u32).map(|g| table.mul(table.mul(g, x), table.inv(g))).collect();
            members.sort_unstable();
            members.dedup();
            for &y in &members {
                class_of[y as usize] = classes.len();
            }
            classes.push(ConjClass { rep: x, members });
        }
        let conductor = table.exponent();
        FiniteGroup { table, classes, class_of, conductor, chars: None }
    }

    /// Attaches and validates a character table (orthonormal rows, trivial first,
    /// sum of squared degrees equal to the order).
    pub fn with_characters(mut self, rows: Vec<ClassFunction>, names: Vec<String>) -> Result<FiniteGroup> {
        let k = self.classes.len();
        if rows.len() != k {
            return Err(Error::InvalidGroup(format!("{} character rows for {k} classes", rows.len())));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.values.len() != k {
                return Err(Error::InvalidGroup(format!("character row {i} has {} values", r.values.len())));
            }
            for v in &r.values {
                if self.conductor % v.conductor() != 0 && v.to_rational().is_none() {
                    return Err(Error::InvalidGroup(format!("value {v} outside Q(zeta_{})", self.conductor)));
                }
            }
        }
        if !rows[0].values.iter().all(|v| v.is_one()) {
            return Err(Error::InvalidGroup("first character row must be trivial".into()));
        }
        let mut deg_sq = Rational::from_integer(0.into());
        for (i, a) in rows.iter().enumerate() {
            let d = a.values[0].to_rational().filter(|q| q.is_integer() && *q > Rational::from_integer(0.into()));
            let d = d.ok_or_else(|| Error::InvalidGroup(format!("character {i} has non-integral degree")))?;
            deg_sq += &d * &d;
            for (j, b) in rows.iter().enumerate() {
                let ip = self.inner_product(a, b)?;
                let want = if i == j { Cyclo::one() } else { Cyclo::zero() };
                if ip != want {
                    return Err(Error::InvalidGroup(format!("characters {i},{j} have inner product {ip}")));
                }
            }
        }
        if deg_sq != Rational::from_integer(self.table.order.into()) {
            return Err(Error::InvalidGroup("squared degrees do not sum to the order".into()));
        }
        let names = if names.len() == rows.len() { names } else { (0..rows.len()).map(|i| format!("phi{i}")).collect() };
        self.chars = Some(CharacterTable { rows, names });
        Ok(self)
    }

    /// The cyclic group Z/m with characters chi_j(x) = zeta_m^(j x).
    pub fn cyclic(m: usize) -> FiniteGroup {
        assert!(m >= 1);
        let rows: Vec<Vec<u32>> = (0..m).map(|x| (0..m).map(|y| ((x + y) % m) as u32).collect()).collect();
        let name = if m == 1 { "trivial".to_string() } else { format!("cyclic{m}") };
        let table = GroupTable::from_cayley(&name, &rows).expect("cyclic table");
        let g = FiniteGroup::from_table(table);
        let chars = (0..m)
            .map(|j| ClassFunction::new((0..m).map(|x| Cyclo::zeta_pow(m as u32, (j * x) as i64).lift(g.conductor)).collect()))
            .collect();
        g.with_characters(chars, (0..m).map(|j| format!("phi{j}")).collect()).expect("cyclic characters")
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    /// S_3 with elements the permutations of {0,1,2} in lexicographic order of
    /// their image arrays; classes {id}, transpositions, 3-cycles; characters
    /// trivial, sign, standard.
    pub fn sym3() -> FiniteGroup {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap() as u32;
        let rows: Vec<Vec<u32>> = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        let table = GroupTable::from_cayley("sym3", &rows).expect("S3 table");
        let g = FiniteGroup::from_table(table);
        let row = |v: [i64; 3]| ClassFunction::new(v.iter().map(|&x| Cyclo::from_int(x)).collect());
        let chars = vec![row([1, 1, 1]), row([1, -1, 1]), row([2, 0, -1])];
        g.with_characters(chars, vec!["trivial".into(), "sgn".into(), "std".into()]).expect("S3 characters")
    }

    /// Builtin by name: `trivial`, `cyclicM` / `cyclic(M)`, `sym3`.
    pub fn builtin(name: &str) -> Option<FiniteGroup> {
        let s = name.trim().to_ascii_lowercase();
        match s.as_str() {
            "trivial" | "1" => return Some(FiniteGroup::trivial()),
            "sym3" | "s3" => return Some(FiniteGroup::sym3()),
            _ => {}
        }
        let rest = s.strip_prefix("cyclic").or_else(|| s.strip_prefix('c'))?;
        let rest = rest.trim_start_matches('(').trim_end_matches(')');
        let m: usize = rest.parse().ok()?;
        (1..=4096).contains(&m).then(|| FiniteGroup::cyclic(m))
    }

    pub fn name(&self) -> &str {
        &self.table.name
    }

    pub fn order(&self) -> usize {
        self.table.order
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class_of(&self, x: u32) -> usize {
        self.class_of[x as usize]
    }

    pub fn characters(&self) -> Result<&CharacterTable> {
        self.chars.as_ref().ok_or_else(|| Error::InvalidGroup(format!("{} has no character table", self.name())))
    }

    pub fn character(&self, i: usize) -> Result<&ClassFunction> {
        let t = self.characters()?;
        t.rows.get(i).ok_or_else(|| Error::Domain(format!("no character phi{i} ({} irreducibles)", t.rows.len())))
    }

    pub fn irreducible_count(&self) -> usize {
        self.chars.as_ref().map(|t| t.rows.len()).unwrap_or(0)
    }

    /// Index of the complex conjugate of irreducible `i`.
    pub fn dual_character(&self, i: usize) -> Result<usize> {
        let t = self.characters()?;
        let c = t.rows[i].conj();
        Ok(t.rows.iter().position(|r| *r == c).expect("conjugate of an irreducible is irreducible"))
    }

    /// Class of x^k for x in class c.
    pub fn power_class(&self, c: usize, k: i64) -> usize {
        let rep = self.classes[c].rep;
        let k = k.rem_euclid(self.conductor as i64) as u64;
        let cls = self.class_of(self.table.pow(rep, k));
        debug_assert!(self.classes[c].members.iter().all(|&x| self.class_of(self.table.pow(x, k)) == cls));
        cls
    }

    /// f^(k)(x) = f(x^k).
    pub fn power_twist_class_fn(&self, f: &ClassFunction, k: i64) -> ClassFunction {
        ClassFunction::new((0..self.class_count()).map(|c| f.values[self.power_class(c, k)].clone()).collect())
    }

    /// <f, g> = |G|^-1 sum_x f(x) conj(g(x)).
    pub fn inner_product(&self, f: &ClassFunction, g: &ClassFunction) -> Result<Cyclo> {
        if f.values.len() != self.class_count() || g.values.len() != self.class_count() {
            return Err(Error::GroupMismatch);
        }
        let mut acc = Cyclo::zero();
        for (c, cls) in self.classes.iter().enumerate() {
            acc = acc + (&f.values[c] * &g.values[c].conj()).scale_int(cls.size() as i64);
        }
        Ok(acc.scale(&Rational::new(1.into(), (self.order() as i64).into())))
    }

    pub fn trivial_class_fn(&self) -> ClassFunction {
        ClassFunction::new(vec![Cyclo::one(); self.class_count()])
    }
}
