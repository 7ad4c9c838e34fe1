//! Static pictures of braid words, read top to bottom.
//!
//! In `σ_i` the strand coming from the left passes behind; the drawings break
//! that strand at the crossing.

use std::fmt::Write as _;

use crate::braid::BraidWord;

const GAP: usize = 4;

/// Plain-text diagram, three rows per letter.
pub fn ascii(w: &BraidWord) -> String {
    let n = w.strands();
    let width = (n - 1) * GAP + 1;
    let mut out = String::new();
    let labels: String = (1..=n)
        .map(|k| format!("{k:<GAP$}"))
        .collect::<String>()
        .trim_end()
        .to_string();
    out.push_str(&labels);
    out.push('\n');
    let idle = |skip: Option<usize>| {
        let mut row = vec![' '; width];
        for k in 0..n {
            if skip.is_some_and(|i| k == i || k == i + 1) {
                continue;
            }
            row[k * GAP] = '|';
        }
        row
    };
    let push = |out: &mut String, row: Vec<char>| {
        out.push_str(row.iter().collect::<String>().trim_end());
        out.push('\n');
    };
    push(&mut out, idle(None));
    for l in w.letters() {
        let i = l.index() - 1;
        let c = i * GAP;
        let mut top = idle(Some(i));
        top[c + 1] = '\\';
        top[c + 3] = '/';
        let mut mid = idle(Some(i));
        // the strand drawn on top: from the right for σ_i, from the left for σ_i⁻¹
        mid[c + 2] = if l.is_positive() { '/' } else { '\\' };
        let mut bottom = idle(Some(i));
        bottom[c + 1] = '/';
        bottom[c + 3] = '\\';
        push(&mut out, top);
        push(&mut out, mid);
        push(&mut out, bottom);
        push(&mut out, idle(None));
    }
    out
}

/// SVG diagram; the under strand is broken by a white halo around the over
/// strand.
pub fn svg(w: &BraidWord) -> String {
    const STEP: f64 = 40.0;
    let n = w.strands();
    let x = |k: usize| STEP * (k as f64 + 1.0);
    let width = STEP * (n as f64 + 1.0);
    let height = STEP * (w.len() as f64 + 1.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<g fill="none" stroke-linecap="round">"#);
    let stroke = |out: &mut String, d: &str, over: bool| {
        if over {
            let _ = writeln!(out, r#"<path d="{d}" stroke="white" stroke-width="10"/>"#);
        }
        let _ = writeln!(out, r#"<path d="{d}" stroke="black" stroke-width="2"/>"#);
    };
    let top = STEP / 2.0;
    for k in 0..n {
        stroke(&mut out, &format!("M {} {} V {}", x(k), 0.0, top), false);
    }
    for (row, l) in w.letters().iter().enumerate() {
        let y0 = top + STEP * row as f64;
        let y1 = y0 + STEP;
        let ym = (y0 + y1) / 2.0;
        let i = l.index() - 1;
        for k in (0..n).filter(|&k| k != i && k != i + 1) {
            stroke(&mut out, &format!("M {} {y0} V {y1}", x(k)), false);
        }
        let from_left = format!(
            "M {} {y0} C {} {ym} {} {ym} {} {y1}",
            x(i),
            x(i),
            x(i + 1),
            x(i + 1)
        );
        let from_right = format!(
            "M {} {y0} C {} {ym} {} {ym} {} {y1}",
            x(i + 1),
            x(i + 1),
            x(i),
            x(i)
        );
        let (under, over) = if l.is_positive() {
            (from_left, from_right)
        } else {
            (from_right, from_left)
        };
        stroke(&mut out, &under, false);
        stroke(&mut out, &over, true);
    }
    let bottom = top + STEP * w.len() as f64;
    for k in 0..n {
        stroke(&mut out, &format!("M {} {bottom} V {height}", x(k)), false);
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_flip() {
        let w = BraidWord::new(3, &[1, 2, 2, 1]).unwrap();
        let text = ascii(&w);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "1   2   3");
        assert_eq!(lines.len(), 2 + 4 * 4);
        assert_eq!(lines[2], " \\ /    |");
        assert_eq!(lines[3], "  /     |");
        assert_eq!(lines[4], " / \\    |");
        assert_eq!(lines[6], "|    \\ /");
    }

    #[test]
    fn ascii_negative_letter() {
        let w = BraidWord::new(3, &[-2]).unwrap();
        let lines: Vec<String> = ascii(&w).lines().map(str::to_string).collect();
        assert_eq!(lines[3], "|     \\");
    }

    #[test]
    fn svg_shape() {
        let w = BraidWord::new(3, &[1, -2]).unwrap();
        let s = svg(&w);
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches(r#"stroke="white""#).count(), 2);
        assert_eq!(svg(&w), s);
    }

    #[test]
    fn empty_word() {
        let w = BraidWord::identity(3);
        assert_eq!(ascii(&w), "1   2   3\n|   |   |\n");
        assert!(svg(&w).contains("<path"));
    }
}
