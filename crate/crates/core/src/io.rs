//! File and text formats: PGM and CSV rasters, family CSV, table listings.

use std::io::Write;

use crate::dynamics::Raster;
use crate::error::Result;
use crate::families::DehnFamilyPoint;
use crate::tables::ExceptionalEntry;

/// Binary PGM (P5, maxval 255), one byte per pixel, row 0 first.
pub fn pgm_bytes(r: &Raster) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", r.width, r.height).into_bytes();
    out.extend(r.cells.iter().map(|c| c.gray()));
    out
}

pub fn write_pgm<W: Write>(r: &Raster, mut w: W) -> Result<()> {
    w.write_all(&pgm_bytes(r))?;
    Ok(())
}

/// Columns `x,y,re,im,code` where `re, im` is the pixel center and `code` its gray level.
pub fn write_raster_csv<W: Write>(r: &Raster, mut w: W) -> Result<()> {
    writeln!(w, "x,y,re,im,code")?;
    for y in 0..r.height {
        for x in 0..r.width {
            let c = r.pixel_center(x, y);
            writeln!(w, "{x},{y},{:e},{:e},{}", c.re, c.im, r.get(x, y).gray())?;
        }
    }
    Ok(())
}

pub const DEHN_CSV_HEADER: &str =
    "p,a_re,a_im,beta_re,beta_im,gamma_re,gamma_im,relator_residual,gamma_gap";

pub fn write_dehn_csv<W: Write>(pts: &[DehnFamilyPoint], mut w: W) -> Result<()> {
    writeln!(w, "{DEHN_CSV_HEADER}")?;
    for pt in pts {
        writeln!(
            w,
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            pt.p,
            pt.a_p.re,
            pt.a_p.im,
            pt.beta_p.re,
            pt.beta_p.im,
            pt.gamma_p.re,
            pt.gamma_p.im,
            pt.relator_residual,
            pt.gamma_gap()
        )?;
    }
    Ok(())
}

/// One line per entry: table id, orders, the rendered triple and group.
pub fn render_tables(entries: &[ExceptionalEntry]) -> String {
    let mut s = String::new();
    for e in entries {
        s.push_str(&format!(
            "table {:<16} orders ({},{})  {}\n",
            e.table_id.to_string(),
            e.orders.0,
            e.orders.1,
            e
        ));
    }
    s
}
