//! Matrix text format: a line with the dimension, then one line per row.

use std::fmt::Write as _;

use super::SymMatrix;
use crate::error::{Error, Result};
use crate::graph::content_lines;

impl SymMatrix {
    pub fn parse_matrix(text: &[u8]) -> Result<Self> {
        let mut lines = content_lines(text)?;
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing dimension".into(),
        })?;
        let dim: usize = header.parse().map_err(|_| Error::Parse {
            line: hline,
            msg: format!("invalid dimension {header:?}"),
        })?;
        if dim > 4096 {
            return Err(Error::Parse {
                line: hline,
                msg: format!("dimension {dim} exceeds 4096"),
            });
        }
        let mut rows = Vec::with_capacity(dim);
        let mut row_lines = Vec::with_capacity(dim);
        for (line, body) in lines {
            if rows.len() == dim {
                return Err(Error::Parse {
                    line,
                    msg: "too many rows".into(),
                });
            }
            let row = body
                .split_ascii_whitespace()
                .map(|tok| match tok.parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(x),
                    _ => Err(Error::Parse {
                        line,
                        msg: format!("invalid entry {tok:?}"),
                    }),
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != dim {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {dim} entries, found {}", row.len()),
                });
            }
            rows.push(row);
            row_lines.push(line);
        }
        if rows.len() != dim {
            return Err(Error::Parse {
                line: hline,
                msg: format!("expected {dim} rows, found {}", rows.len()),
            });
        }
        for i in 0..dim {
            for j in 0..i {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
                    return Err(Error::Parse {
                        line: row_lines[i],
                        msg: format!("entry ({i}, {j}) = {a} differs from ({j}, {i}) = {b}"),
                    });
                }
            }
        }
        SymMatrix::from_rows(&rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.dim());
        for i in 0..self.dim() {
            let row = self.row(i);
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                write!(out, "{x}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}
