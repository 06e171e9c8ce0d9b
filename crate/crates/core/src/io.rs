//! JSON file format for q-bic forms.
//!
//! ```json
//! {"field": {"p": 2, "s": 2, "modulus": [1, 1, 1]}, "e": 1, "dim": 2,
//!  "gram": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}
//! ```
//!
//! Each scalar is its coefficient vector over GF(p) in the field's polynomial
//! basis, constant term first.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::QBicForm;
use crate::gf::{FieldCtx, FieldDescriptor};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramFile {
    pub field: FieldDescriptor,
    pub e: u32,
    pub dim: usize,
    pub gram: Vec<Vec<Vec<u32>>>,
}

impl GramFile {
    pub fn from_form(f: &QBicForm) -> GramFile {
        let ctx = f.ctx();
        let g = f.gram();
        GramFile {
            field: ctx.descriptor(),
            e: f.e(),
            dim: f.dim(),
            gram: (0..g.rows())
                .map(|r| g.row(r).iter().map(|&x| ctx.to_coeffs(x)).collect())
                .collect(),
        }
    }

    pub fn to_form(&self) -> Result<QBicForm> {
        let built = FieldCtx::get(self.field.p, self.field.s)?;
        // reuse the shared context when the modulus is the default one
        let ctx = if built.modulus() == self.field.modulus.as_slice() {
            built
        } else {
            Arc::new(FieldCtx::from_descriptor(&self.field)?)
        };
        if self.gram.len() != self.dim || self.gram.iter().any(|r| r.len() != self.dim) {
            return Err(Error::Parse(format!("gram is not {0}x{0}", self.dim)));
        }
        let mut rows = Vec::with_capacity(self.dim);
        for r in &self.gram {
            let row = r
                .iter()
                .map(|c| {
                    if c.len() != ctx.s() as usize {
                        return Err(Error::Parse(format!(
                            "scalar with {} coefficients in GF({}^{})",
                            c.len(),
                            ctx.p(),
                            ctx.s()
                        )));
                    }
                    if c.iter().any(|&d| d >= ctx.p()) {
                        return Err(Error::Parse("coefficient out of range".into()));
                    }
                    ctx.from_coeffs(c)
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        QBicForm::new(Matrix::from_rows(&ctx, &rows, self.dim)?, self.e)
    }
}

pub fn form_to_json(f: &QBicForm) -> String {
    serde_json::to_string_pretty(&GramFile::from_form(f)).expect("plain data serializes")
}

pub fn form_from_json(s: &str) -> Result<QBicForm> {
    let file: GramFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_form()
}

pub fn read_form(path: &Path) -> Result<QBicForm> {
    form_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_form(path: &Path, f: &QBicForm) -> Result<()> {
    std::fs::write(path, form_to_json(f))?;
    Ok(())
}
