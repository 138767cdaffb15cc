/** A minimal retained scene: plot builders emit nodes, writers serialize. */

export type SceneNode =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string;
      stroke?: string }
  | { kind: "line"; x1: number; y1: number; x2: number; y2: number;
      stroke: string; width: number; dash?: string }
  | { kind: "polyline"; points: [number, number][]; stroke: string;
      width: number; dash?: string }
  | { kind: "polygon"; points: [number, number][]; fill: string;
      stroke?: string; strokeWidth?: number }
  | { kind: "circle"; cx: number; cy: number; r: number; fill: string }
  | { kind: "text"; x: number; y: number; text: string; size: number;
      anchor: "start" | "middle" | "end"; fill?: string; rotate?: number };

export interface Scene {
  width: number;
  height: number;
  nodes: SceneNode[];
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function num(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return String(Object.is(rounded, -0) ? 0 : rounded);
}

function pointList(points: [number, number][]): string {
  return points.map(([x, y]) => `${num(x)},${num(y)}`).join(" ");
}

export function sceneToSvg(scene: Scene): string {
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" ` +
    `height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}" ` +
    `font-family="sans-serif">`,
    `<rect x="0" y="0" width="${scene.width}" height="${scene.height}" fill="white"/>`,
  ];
  for (const node of scene.nodes) {
    switch (node.kind) {
      case "rect": {
        const stroke = node.stroke ? ` stroke="${node.stroke}"` : "";
        parts.push(`<rect x="${num(node.x)}" y="${num(node.y)}" ` +
          `width="${num(node.w)}" height="${num(node.h)}" fill="${node.fill}"${stroke}/>`);
        break;
      }
      case "line": {
        const dash = node.dash ? ` stroke-dasharray="${node.dash}"` : "";
        parts.push(`<line x1="${num(node.x1)}" y1="${num(node.y1)}" ` +
          `x2="${num(node.x2)}" y2="${num(node.y2)}" stroke="${node.stroke}" ` +
          `stroke-width="${node.width}"${dash}/>`);
        break;
      }
      case "polyline": {
        const dash = node.dash ? ` stroke-dasharray="${node.dash}"` : "";
        parts.push(`<polyline points="${pointList(node.points)}" fill="none" ` +
          `stroke="${node.stroke}" stroke-width="${node.width}"${dash} ` +
          `stroke-linejoin="round"/>`);
        break;
      }
      case "polygon": {
        const stroke = node.stroke
          ? ` stroke="${node.stroke}" stroke-width="${node.strokeWidth ?? 1}"`
          : "";
        parts.push(`<polygon points="${pointList(node.points)}" ` +
          `fill="${node.fill}"${stroke}/>`);
        break;
      }
      case "circle":
        parts.push(`<circle cx="${num(node.cx)}" cy="${num(node.cy)}" ` +
          `r="${num(node.r)}" fill="${node.fill}"/>`);
        break;
      case "text": {
        const fill = node.fill ?? "#222";
        const rotate = node.rotate
          ? ` transform="rotate(${node.rotate} ${num(node.x)} ${num(node.y)})"`
          : "";
        parts.push(`<text x="${num(node.x)}" y="${num(node.y)}" ` +
          `font-size="${node.size}" text-anchor="${node.anchor}" ` +
          `fill="${fill}"${rotate}>${escapeXml(node.text)}</text>`);
        break;
      }
    }
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
