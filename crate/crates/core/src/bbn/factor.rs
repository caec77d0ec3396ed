//! Dense factors over discrete variables.

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Factor {
    /// Sorted variable indices.
    pub vars: Vec<usize>,
    pub card: Vec<usize>,
    /// Row-major over `vars`, last variable fastest.
    pub values: Vec<f64>,
}

impl Factor {
    pub fn scalar(v: f64) -> Self {
        Factor { vars: Vec::new(), card: Vec::new(), values: vec![v] }
    }

    /// Factor over `vars` (any order) filled by `f(assignment)`, where the
    /// assignment is given in the order of `vars`.
    pub fn from_fn(vars: &[usize], cards: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by_key(|&i| vars[i]);
        let sorted: Vec<usize> = order.iter().map(|&i| vars[i]).collect();
        let card: Vec<usize> = order.iter().map(|&i| cards[i]).collect();
        let size: usize = card.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut assign = vec![0usize; vars.len()];
        let mut original = vec![0usize; vars.len()];
        for _ in 0..size {
            for (k, &i) in order.iter().enumerate() {
                original[i] = assign[k];
            }
            values.push(f(&original));
            increment(&mut assign, &card);
        }
        Factor { vars: sorted, card, values }
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.vars.len()];
        for i in (0..self.vars.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.card[i + 1];
        }
        s
    }

    pub fn product(&self, other: &Factor) -> Factor {
        let mut vars: Vec<usize> = self.vars.iter().chain(&other.vars).copied().collect();
        vars.sort_unstable();
        vars.dedup();
        let card: Vec<usize> = vars
            .iter()
            .map(|v| match self.vars.iter().position(|x| x == v) {
                Some(i) => self.card[i],
                None => other.card[other.vars.iter().position(|x| x == v).unwrap()],
            })
            .collect();
        let map = |f: &Factor| -> Vec<usize> {
            let st = f.strides();
            vars.iter()
                .map(|v| f.vars.iter().position(|x| x == v).map_or(0, |i| st[i]))
                .collect()
        };
        let (sa, sb) = (map(self), map(other));
        let size: usize = card.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut assign = vec![0usize; vars.len()];
        for _ in 0..size {
            let ia: usize = assign.iter().zip(&sa).map(|(a, s)| a * s).sum();
            let ib: usize = assign.iter().zip(&sb).map(|(a, s)| a * s).sum();
            values.push(self.values[ia] * other.values[ib]);
            increment(&mut assign, &card);
        }
        Factor { vars, card, values }
    }

    pub fn sum_out(&self, var: usize) -> Factor {
        let Some(k) = self.vars.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let mut vars = self.vars.clone();
        let mut card = self.card.clone();
        vars.remove(k);
        card.remove(k);
        let size: usize = card.iter().product();
        let mut values = vec![0.0; size];
        let mut assign = vec![0usize; self.vars.len()];
        for &v in &self.values {
            let mut out = 0;
            for (i, a) in assign.iter().enumerate() {
                if i != k {
                    out = out * self.card[i] + a;
                }
            }
            values[out] += v;
            increment(&mut assign, &self.card);
        }
        Factor { vars, card, values }
    }

    /// Fixes `var` to `state` and drops it from the scope.
    pub fn reduce(&self, var: usize, state: usize) -> Factor {
        let Some(k) = self.vars.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let mut vars = self.vars.clone();
        let mut card = self.card.clone();
        vars.remove(k);
        card.remove(k);
        let mut values = Vec::new();
        let mut assign = vec![0usize; self.vars.len()];
        for &v in &self.values {
            if assign[k] == state {
                values.push(v);
            }
            increment(&mut assign, &self.card);
        }
        Factor { vars, card, values }
    }
}

/// Advances a mixed-radix counter, last digit fastest.
fn increment(assign: &mut [usize], card: &[usize]) {
    for i in (0..assign.len()).rev() {
        assign[i] += 1;
        if assign[i] < card[i] {
            return;
        }
        assign[i] = 0;
    }
}
