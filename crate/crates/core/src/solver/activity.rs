//! Decision heuristic state: per-variable activities with multiplicative
//! decay. Decaying divides the increment instead of touching every score,
//! so one decay step scales all earlier bumps by the decay factor relative
//! to later ones.

use crate::literal::Var;

const RESCALE_LIMIT: f64 = 1e100;

#[derive(Debug)]
pub struct Activity {
    scores: Vec<f64>,
    increment: f64,
    decay: f64,
}

impl Activity {
    pub fn new(num_vars: usize, decay: f64) -> Activity {
        assert!(decay > 0.0 && decay <= 1.0);
        Activity {
            scores: vec![0.0; num_vars + 1],
            increment: 1.0,
            decay,
        }
    }

    pub fn bump(&mut self, var: Var) {
        let idx = var.index() as usize;
        self.scores[idx] += self.increment;
        if self.scores[idx] > RESCALE_LIMIT {
            for score in &mut self.scores {
                *score /= RESCALE_LIMIT;
            }
            self.increment /= RESCALE_LIMIT;
        }
    }

    pub fn decay(&mut self) {
        self.increment /= self.decay;
    }

    pub fn score(&self, var: Var) -> f64 {
        self.scores[var.index() as usize]
    }

    /// Highest-activity variable among those the filter accepts; ties go
    /// to the lowest index.
    pub fn best_var<F: Fn(Var) -> bool>(&self, accept: F) -> Option<Var> {
        let mut best: Option<(Var, f64)> = None;
        for idx in 1..self.scores.len() {
            let var = Var::new(idx as u32);
            if !accept(var) {
                continue;
            }
            let score = self.scores[idx];
            match best {
                Some((_, best_score)) if score <= best_score => {}
                _ => best = Some((var, score)),
            }
        }
        best.map(|(var, _)| var)
    }
}
