//! Pruned enumeration of integers satisfying several digit conditions at once.
//!
//! One constraint, the *generator*, is expanded digit by digit, most-significant
//! first. A partial prefix fixes the top digits and therefore confines every
//! completion to a value interval `[P + min_fill, P + max_fill]`; a branch is cut
//! as soon as some filter has no member in that interval. Members are produced
//! in increasing order (or decreasing, for [`largest_member_below`]).
//!
//! The traversal is an explicit cursor over the digit tree, so it can be
//! suspended into a [`SearchCheckpoint`] and resumed, or split into disjoint
//! subtrees with [`SearchSpec::partition`] and run on several workers.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use crate::numeral::{self, check_base, horner, raw_digits, ConstraintSystem, DigitConstraint, Natural};
use crate::{Error, Result};

/// Smallest `n >= x` whose base-`c.base` digits are all allowed.
///
/// Zero satisfies every constraint. If only the digit 0 is allowed, no positive
/// member exists and [`Error::NoMember`] is returned for `x > 0`.
pub fn next_member_geq(x: &Natural, c: &DigitConstraint) -> Result<Natural> {
    let base = c.base();
    let mut digits = raw_digits(x, base);
    let len = digits.len();
    // Highest position holding a forbidden digit.
    let Some(bad) = (0..len).rev().find(|&i| !c.allows(digits[i])) else {
        return Ok(x.clone());
    };
    let min = c.min_digit();
    let mut pos = bad;
    loop {
        if pos == len {
            // Every number of this length is exhausted: smallest longer member.
            let lead = c.next_allowed_above(0).ok_or(Error::NoMember)?;
            let mut out = alloc::vec![min; len + 1];
            out[len] = lead;
            return Ok(horner(base, &out));
        }
        if let Some(d) = c.next_allowed_above(digits[pos]) {
            digits[pos] = d;
            for slot in &mut digits[..pos] {
                *slot = min;
            }
            return Ok(horner(base, &digits));
        }
        pos += 1;
    }
}

/// Whether some member of `c` lies in the closed interval `[lo, hi]`.
pub fn interval_has_member(lo: &Natural, hi: &Natural, c: &DigitConstraint) -> bool {
    match next_member_geq(lo, c) {
        Ok(n) => &n <= hi,
        Err(_) => false,
    }
}

/// A condition applied to candidates produced by the generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Filter {
    /// Every digit lies in an allowed set.
    Digits(DigitConstraint),
    /// At least one digit of `0..base` is absent.
    MissesSomeDigit { base: u32 },
}

impl From<DigitConstraint> for Filter {
    fn from(c: DigitConstraint) -> Self {
        Filter::Digits(c)
    }
}

impl Filter {
    pub fn misses_some_digit(base: u32) -> Result<Self> {
        check_base(base, 3)?;
        Ok(Filter::MissesSomeDigit { base })
    }

    pub fn base(&self) -> u32 {
        match self {
            Filter::Digits(c) => c.base(),
            Filter::MissesSomeDigit { base } => *base,
        }
    }

    pub fn admits(&self, n: &Natural) -> bool {
        match self {
            Filter::Digits(c) => numeral::satisfies(n, c),
            Filter::MissesSomeDigit { base } => numeral::misses_digit_raw(&raw_digits(n, *base), *base),
        }
    }

    /// Smallest admitted value `>= x`, if any.
    pub fn next_member_geq(&self, x: &Natural) -> Option<Natural> {
        match self {
            Filter::Digits(c) => next_member_geq(x, c).ok(),
            Filter::MissesSomeDigit { base } => {
                if self.admits(x) {
                    return Some(x.clone());
                }
                (0..*base)
                    .filter_map(|d| {
                        let c = DigitConstraint::without(*base, d).ok()?;
                        next_member_geq(x, &c).ok()
                    })
                    .min()
            }
        }
    }

    pub fn has_member_in(&self, lo: &Natural, hi: &Natural) -> bool {
        self.next_member_geq(lo).is_some_and(|n| &n <= hi)
    }

    fn describe(&self) -> String {
        match self {
            Filter::Digits(c) => c.to_spec_string(),
            Filter::MissesSomeDigit { base } => alloc::format!("{base}:miss"),
        }
    }
}

/// Traversal direction of the digit tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Ascending,
    Descending,
}

/// Generator constraint, filters and half-open value range `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    generator: DigitConstraint,
    filters: Vec<Filter>,
    lo: Natural,
    hi: Natural,
}

impl SearchSpec {
    pub fn new(generator: DigitConstraint, filters: Vec<Filter>, lo: Natural, hi: Natural) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidRange(alloc::format!("[{lo}, {hi}) is empty")));
        }
        let mut bases = alloc::vec![generator.base()];
        for f in &filters {
            if bases.contains(&f.base()) {
                return Err(Error::InvalidConstraint(alloc::format!(
                    "base {} appears twice",
                    f.base()
                )));
            }
            bases.push(f.base());
        }
        Ok(SearchSpec {
            generator,
            filters,
            lo,
            hi,
        })
    }

    /// Generator chosen as the constraint with the fewest allowed digits, ties
    /// going to the larger base.
    pub fn from_system(system: &ConstraintSystem, lo: Natural, hi: Natural) -> Result<Self> {
        let best = system
            .constraints()
            .iter()
            .min_by(|a, b| {
                a.allowed()
                    .len()
                    .cmp(&b.allowed().len())
                    .then(b.base().cmp(&a.base()))
            })
            .expect("constraint systems are nonempty")
            .base();
        SearchSpec::from_system_with_generator(system, best, lo, hi)
    }

    /// Uses the constraint with base `generator_base` as generator.
    pub fn from_system_with_generator(
        system: &ConstraintSystem,
        generator_base: u32,
        lo: Natural,
        hi: Natural,
    ) -> Result<Self> {
        let generator = system
            .constraints()
            .iter()
            .find(|c| c.base() == generator_base)
            .cloned()
            .ok_or_else(|| Error::InvalidConstraint(alloc::format!("no constraint in base {generator_base}")))?;
        let filters = system
            .constraints()
            .iter()
            .filter(|c| c.base() != generator_base)
            .cloned()
            .map(Filter::from)
            .collect();
        SearchSpec::new(generator, filters, lo, hi)
    }

    pub fn generator(&self) -> &DigitConstraint {
        &self.generator
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    pub fn lo(&self) -> &Natural {
        &self.lo
    }

    pub fn hi(&self) -> &Natural {
        &self.hi
    }

    /// Whether `n` lies in range and satisfies generator and filters.
    pub fn admits(&self, n: &Natural) -> bool {
        n >= &self.lo
            && n < &self.hi
            && numeral::satisfies(n, &self.generator)
            && self.filters.iter().all(|f| f.admits(n))
    }

    /// Canonical text form hashed by [`SearchSpec::digest`].
    pub fn canonical_text(&self) -> String {
        let mut s = alloc::format!("gen={};filters=", self.generator.to_spec_string());
        for (i, f) in self.filters.iter().enumerate() {
            if i > 0 {
                s.push('|');
            }
            s.push_str(&f.describe());
        }
        let _ = write!(s, ";lo={};hi={}", self.lo, self.hi);
        s
    }

    /// Lower-case hex SHA-256 of the canonical text.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical_text().as_bytes());
        let mut out = String::with_capacity(64);
        for b in hash {
            let _ = write!(out, "{b:02x}");
        }
        out
    }

    /// Number of generator digit positions spanned by the range.
    pub fn width(&self) -> usize {
        let top = &self.hi - 1u32;
        raw_digits(&top, self.generator.base()).len().max(1)
    }

    /// Whether the subtree under the most-significant-first digit prefix may
    /// contain a member. A `false` answer is a proof of emptiness.
    pub fn prefix_viable(&self, prefix: &[u32]) -> bool {
        let tree = Tree::new(self);
        if prefix.len() > tree.width || !tree.valid_prefix(prefix) {
            return false;
        }
        let value = tree.prefix_value(prefix);
        tree.viable(prefix, &value)
    }

    /// All viable prefixes of the top `depth` positions, in increasing order.
    /// Their subtrees partition the search.
    pub fn partition(&self, depth: usize) -> Vec<Vec<u32>> {
        let tree = Tree::new(self);
        let depth = depth.min(tree.width);
        let mut out = Vec::new();
        let mut stack: Vec<Vec<u32>> = alloc::vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            let value = tree.prefix_value(&prefix);
            if !tree.viable(&prefix, &value) {
                continue;
            }
            if prefix.len() == depth {
                out.push(prefix);
                continue;
            }
            let opts = tree.options(&prefix);
            for &d in opts.iter().rev() {
                let mut p = prefix.clone();
                p.push(d);
                stack.push(p);
            }
        }
        out
    }
}

/// Precomputed geometry of the generator digit tree.
#[derive(Debug, Clone)]
struct Tree<'a> {
    spec: &'a SearchSpec,
    width: usize,
    /// `base^j` for `j = 0..=width`.
    powers: Vec<Natural>,
    /// Smallest / largest completion of `r` free positions.
    min_fill: Vec<Natural>,
    max_fill: Vec<Natural>,
    /// Options at a non-leading position, and at a position above the leading digit.
    options: Vec<u32>,
    leading_options: Vec<u32>,
    top: Natural,
}

impl<'a> Tree<'a> {
    fn new(spec: &'a SearchSpec) -> Self {
        let width = spec.width();
        let base = spec.generator.base();
        let mut powers = Vec::with_capacity(width + 1);
        let mut p = Natural::one();
        for _ in 0..=width {
            powers.push(p.clone());
            p *= base;
        }
        let min = spec.generator.min_digit();
        let max = spec.generator.max_digit();
        let mut min_fill = alloc::vec![Natural::zero()];
        let mut max_fill = alloc::vec![Natural::zero()];
        for j in 0..width {
            min_fill.push(&min_fill[j] + &powers[j] * min);
            max_fill.push(&max_fill[j] + &powers[j] * max);
        }
        let options = spec.generator.allowed().to_vec();
        let mut leading_options = options.clone();
        if !spec.generator.allows(0) {
            leading_options.insert(0, 0);
        }
        Tree {
            spec,
            width,
            powers,
            min_fill,
            max_fill,
            options,
            leading_options,
            top: &spec.hi - 1u32,
        }
    }

    /// Digit choices at the position following `prefix`.
    fn options(&self, prefix: &[u32]) -> &[u32] {
        if prefix.iter().all(|&d| d == 0) {
            &self.leading_options
        } else {
            &self.options
        }
    }

    fn valid_prefix(&self, prefix: &[u32]) -> bool {
        (0..prefix.len()).all(|i| self.options(&prefix[..i]).contains(&prefix[i]))
    }

    fn prefix_value(&self, prefix: &[u32]) -> Natural {
        let mut v = Natural::zero();
        for (i, &d) in prefix.iter().enumerate() {
            if d != 0 {
                v += &self.powers[self.width - 1 - i] * d;
            }
        }
        v
    }

    /// Pruning test for the subtree rooted at `prefix` whose value is `value`.
    fn viable(&self, prefix: &[u32], value: &Natural) -> bool {
        let rem = self.width - prefix.len();
        let leading = prefix.iter().all(|&d| d == 0);
        let mut lo = if leading {
            value.clone()
        } else {
            value + &self.min_fill[rem]
        };
        let mut hi = value + &self.max_fill[rem];
        if lo < self.spec.lo {
            lo = self.spec.lo.clone();
        }
        if hi > self.top {
            hi = self.top.clone();
        }
        if lo > hi {
            return false;
        }
        if rem == 0 {
            return self.spec.filters.iter().all(|f| f.admits(&lo));
        }
        self.spec.filters.iter().all(|f| f.has_member_in(&lo, &hi))
    }
}

/// Resumable state of a search: the path to the next unexamined node of the
/// generator digit tree, as `(position, digit)` pairs from the most significant
/// position down.
///
/// An empty stack means the search is exhausted, except for a fresh search
/// (`elapsed_nodes == 0`), which starts at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchCheckpoint {
    pub spec_digest: String,
    pub prefix_stack: Vec<(u32, u32)>,
    pub members_found: u64,
    pub largest_found: Option<Natural>,
    pub elapsed_nodes: u64,
}

impl SearchCheckpoint {
    pub fn is_exhausted(&self) -> bool {
        self.prefix_stack.is_empty() && self.elapsed_nodes > 0
    }
}

/// Iterator over the members of a [`SearchSpec`].
#[derive(Debug, Clone)]
pub struct Search<'a> {
    tree: Tree<'a>,
    order: Order,
    /// Digits of the next node to examine, most significant first.
    path: Vec<u32>,
    /// `values[i]` is the value of `path[..=i]`.
    values: Vec<Natural>,
    /// Positions `path[..floor]` belong to a fixed subtree prefix.
    floor: usize,
    exhausted: bool,
    nodes: u64,
    found: u64,
    largest: Option<Natural>,
}

impl<'a> Search<'a> {
    pub fn new(spec: &'a SearchSpec, order: Order) -> Self {
        Search::within(spec, &[], order)
    }

    /// Restricts the traversal to the subtree below a most-significant-first prefix.
    pub fn within(spec: &'a SearchSpec, prefix: &[u32], order: Order) -> Self {
        let tree = Tree::new(spec);
        let valid = prefix.len() <= tree.width && tree.valid_prefix(prefix);
        let mut s = Search {
            tree,
            order,
            path: Vec::new(),
            values: Vec::new(),
            floor: prefix.len(),
            exhausted: !valid,
            nodes: 0,
            found: 0,
            largest: None,
        };
        if valid {
            for &d in prefix {
                s.push(d);
            }
        }
        s
    }

    /// Resumes an ascending full search from a checkpoint.
    pub fn resume(spec: &'a SearchSpec, ck: &SearchCheckpoint) -> Result<Self> {
        let expected = spec.digest();
        if ck.spec_digest != expected {
            return Err(Error::CheckpointMismatch {
                expected,
                found: ck.spec_digest.clone(),
            });
        }
        let mut s = Search::new(spec, Order::Ascending);
        let width = s.tree.width;
        let mut digits = Vec::with_capacity(ck.prefix_stack.len());
        for (i, &(pos, d)) in ck.prefix_stack.iter().enumerate() {
            if i >= width || pos as usize != width - 1 - i {
                return Err(Error::InvalidCheckpoint(alloc::format!(
                    "entry {i} has position {pos}, expected {}",
                    width.saturating_sub(1 + i)
                )));
            }
            digits.push(d);
        }
        if !s.tree.valid_prefix(&digits) {
            return Err(Error::InvalidCheckpoint("prefix stack is not a path of the digit tree".into()));
        }
        for d in digits {
            s.push(d);
        }
        s.nodes = ck.elapsed_nodes;
        s.found = ck.members_found;
        s.largest = ck.largest_found.clone();
        s.exhausted = ck.is_exhausted();
        Ok(s)
    }

    pub fn checkpoint(&self) -> SearchCheckpoint {
        let width = self.tree.width;
        let prefix_stack = if self.exhausted {
            Vec::new()
        } else {
            self.path
                .iter()
                .enumerate()
                .map(|(i, &d)| ((width - 1 - i) as u32, d))
                .collect()
        };
        SearchCheckpoint {
            spec_digest: self.tree.spec.digest(),
            prefix_stack,
            members_found: self.found,
            largest_found: self.largest.clone(),
            elapsed_nodes: self.nodes,
        }
    }

    pub fn nodes_visited(&self) -> u64 {
        self.nodes
    }

    pub fn members_found(&self) -> u64 {
        self.found
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    fn push(&mut self, d: u32) {
        let i = self.path.len();
        let base_value = if i == 0 { Natural::zero() } else { self.values[i - 1].clone() };
        let v = if d == 0 {
            base_value
        } else {
            base_value + &self.tree.powers[self.tree.width - 1 - i] * d
        };
        self.path.push(d);
        self.values.push(v);
    }

    fn pop(&mut self) {
        self.path.pop();
        self.values.pop();
    }

    fn first_option(&self, opts: &[u32]) -> u32 {
        match self.order {
            Order::Ascending => opts[0],
            Order::Descending => opts[opts.len() - 1],
        }
    }

    /// Moves to the next sibling, climbing as needed; marks exhaustion at the floor.
    fn advance(&mut self) {
        loop {
            if self.path.len() <= self.floor {
                self.exhausted = true;
                return;
            }
            let i = self.path.len() - 1;
            let cur = self.path[i];
            let opts = self.tree.options(&self.path[..i]);
            let idx = opts.iter().position(|&d| d == cur).expect("path digit is an option");
            let next = match self.order {
                Order::Ascending => opts.get(idx + 1).copied(),
                Order::Descending => idx.checked_sub(1).map(|j| opts[j]),
            };
            self.pop();
            if let Some(d) = next {
                self.push(d);
                return;
            }
        }
    }
}

/// Outcome of [`Search::step`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Member(Natural),
    /// The node budget ran out before the next member; the search can continue.
    Paused,
    Exhausted,
}

impl Search<'_> {
    /// Like [`Iterator::next`], but examines at most `node_budget` nodes.
    pub fn step(&mut self, node_budget: u64) -> Step {
        let mut budget = node_budget;
        while !self.exhausted {
            if budget == 0 {
                return Step::Paused;
            }
            budget -= 1;
            self.nodes += 1;
            let value = self.values.last().cloned().unwrap_or_default();
            if !self.tree.viable(&self.path, &value) {
                self.advance();
                continue;
            }
            if self.path.len() == self.tree.width {
                self.advance();
                self.found += 1;
                let replace = match (&self.largest, self.order) {
                    (None, _) => true,
                    (Some(_), Order::Descending) => false,
                    (Some(l), Order::Ascending) => &value > l,
                };
                if replace {
                    self.largest = Some(value.clone());
                }
                return Step::Member(value);
            }
            let d = self.first_option(self.tree.options(&self.path));
            self.push(d);
        }
        Step::Exhausted
    }
}

impl Iterator for Search<'_> {
    type Item = Natural;

    fn next(&mut self) -> Option<Natural> {
        loop {
            match self.step(u64::MAX) {
                Step::Member(v) => return Some(v),
                Step::Exhausted => return None,
                Step::Paused => {}
            }
        }
    }
}

/// All members in increasing order.
pub fn enumerate_members(spec: &SearchSpec) -> Search<'_> {
    Search::new(spec, Order::Ascending)
}

pub fn count_members(spec: &SearchSpec) -> u64 {
    enumerate_members(spec).fold(0, |n, _| n + 1)
}

/// Largest member, found by a descending traversal.
pub fn largest_member_below(spec: &SearchSpec) -> Option<Natural> {
    Search::new(spec, Order::Descending).next()
}

/// Converts a range bound written as `a^b` or a decimal integer.
pub fn parse_natural(text: &str) -> Result<Natural> {
    let text = text.trim();
    let bad = || Error::InvalidRange(alloc::format!("cannot parse {text:?} as a natural (use n or a^b)"));
    if let Some((a, b)) = text.split_once('^') {
        let a: Natural = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a < BigUint::from(2u32) {
            return Err(Error::InvalidRange(alloc::format!("power base in {text:?} must be at least 2")));
        }
        Ok(num_traits::pow(a, b as usize))
    } else {
        text.parse().map_err(|_| bad())
    }
}
