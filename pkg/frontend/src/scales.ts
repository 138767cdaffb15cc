/** Axis scales and tick selection for the plot frames. */

export interface Tick {
  value: number;
  label: string;
}

export interface Scale {
  map(value: number): number;
  domain: [number, number];
  ticks: Tick[];
}

/** Short label: plain digits when compact, scientific otherwise. */
export function formatTick(value: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e-3 && magnitude < 1e4) {
    const text = value.toPrecision(6);
    return text.includes(".")
      ? text.replace(/0+$/, "").replace(/\.$/, "")
      : text;
  }
  const exponent = Math.floor(Math.log10(magnitude));
  const mantissa = value / 10 ** exponent;
  const head = Math.abs(mantissa - 1) < 1e-9
    ? (value < 0 ? "-" : "")
    : `${formatTick(mantissa)}x`;
  return `${head}1e${exponent}`.replace("x1e", "e").replace(/^e/, "1e");
}

function niceStep(span: number, maxTicks: number): number {
  const raw = span / Math.max(1, maxTicks);
  const power = 10 ** Math.floor(Math.log10(raw));
  for (const m of [1, 2, 5, 10]) {
    if (m * power >= raw) return m * power;
  }
  return 10 * power;
}

export function linearScale(domain: [number, number], range: [number, number],
    maxTicks = 6): Scale {
  const [d0, d1] = domain;
  const span = d1 - d0 || 1;
  const step = niceStep(span, maxTicks);
  const ticks: Tick[] = [];
  for (let v = Math.ceil(d0 / step) * step; v <= d1 + 1e-9 * span; v += step) {
    const value = Math.abs(v) < step * 1e-9 ? 0 : v;
    ticks.push({ value, label: formatTick(value) });
  }
  return {
    domain,
    ticks,
    map: (value) => range[0] + ((value - d0) / span) * (range[1] - range[0]),
  };
}

export function logScale(domain: [number, number], range: [number, number]):
    Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale needs positive bounds, got [${d0}, ${d1}]`);
  }
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const span = l1 - l0 || 1;
  const ticks: Tick[] = [];
  const firstDecade = Math.ceil(l0 - 1e-9);
  const lastDecade = Math.floor(l1 + 1e-9);
  const decades = lastDecade - firstDecade;
  // Whole decades when there are enough of them; 1-2-5 mantissas otherwise.
  const mantissas = decades >= 3 ? [1] : [1, 2, 5];
  for (let e = firstDecade - 1; e <= lastDecade + 1; e++) {
    for (const m of mantissas) {
      const value = m * 10 ** e;
      const l = Math.log10(value);
      if (l >= l0 - 1e-9 && l <= l1 + 1e-9) {
        ticks.push({ value, label: formatTick(value) });
      }
    }
  }
  return {
    domain,
    ticks,
    map: (value) =>
      range[0] + ((Math.log10(value) - l0) / span) * (range[1] - range[0]),
  };
}

/** Pad a data interval by a fraction on both sides (in log space if asked). */
export function padded(lo: number, hi: number, fraction: number,
    log = false): [number, number] {
  if (log) {
    const f = (hi / lo) ** fraction;
    return [lo / f, hi * f];
  }
  const pad = (hi - lo || Math.abs(hi) || 1) * fraction;
  return [lo - pad, hi + pad];
}
