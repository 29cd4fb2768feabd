/** Server-side SVG rendering through echarts' SSR mode. */

import * as echarts from "echarts";

/**
 * echarts derives SVG class names from process-wide counters
 * (zr<instance>-cls-<n>), so the same figure rendered twice differs in
 * class names only.  Renumber classes by first occurrence so identical
 * input yields byte-identical SVG.
 */
function canonicalizeClassNames(svg: string): string {
  const seen = new Map<string, string>();
  return svg.replace(/\bzr\d+-cls-\d+\b/g, (name) => {
    let canon = seen.get(name);
    if (canon === undefined) {
      canon = `zr-cls-${seen.size}`;
      seen.set(name, canon);
    }
    return canon;
  });
}

/** Clip-path ids carry the same instance prefix; their own numbering is
 *  per-instance, so dropping the prefix suffices. */
function canonicalizeClipIds(svg: string): string {
  return svg.replace(/\bzr\d+-c(\d+)\b/g, "zr-c$1");
}

export function renderSvg(
  option: Record<string, unknown>,
  width = 800,
  height = 500,
): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  try {
    chart.setOption(option as echarts.EChartsCoreOption);
    return canonicalizeClipIds(canonicalizeClassNames(chart.renderToSVGString()));
  } finally {
    chart.dispose();
  }
}
