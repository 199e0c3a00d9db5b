// Deterministic force-directed layout, seeded from the run id so the
// same run always renders the same picture.

import { GraphEdge } from "./types.js";

export interface Point {
    x: number;
    y: number;
}

function hashString(text: string): number {
    let h = 2166136261;
    for (let i = 0; i < text.length; i++) {
        h ^= text.charCodeAt(i);
        h = Math.imul(h, 16777619);
    }
    return h >>> 0;
}

function mulberry32(seed: number): () => number {
    let state = seed >>> 0;
    return () => {
        state = (state + 0x6d2b79f5) >>> 0;
        let t = state;
        t = Math.imul(t ^ (t >>> 15), t | 1);
        t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
}

export function layoutGraph(
    nodeIds: string[],
    edges: GraphEdge[],
    seed: string,
    iterations = 150,
): Map<string, Point> {
    const rand = mulberry32(hashString(seed));
    const n = nodeIds.length;
    const index = new Map(nodeIds.map((id, i) => [id, i]));
    const xs = new Float64Array(n);
    const ys = new Float64Array(n);
    for (let i = 0; i < n; i++) {
        xs[i] = rand();
        ys[i] = rand();
    }
    const springs = edges
        .filter((e) => index.has(e.source) && index.has(e.target))
        .map((e) => [index.get(e.source)!, index.get(e.target)!] as const);

    const repulsion = 0.005;
    const spring = 0.05;
    const restLength = 0.25;
    for (let step = 0; step < iterations; step++) {
        const fx = new Float64Array(n);
        const fy = new Float64Array(n);
        for (let i = 0; i < n; i++) {
            for (let j = i + 1; j < n; j++) {
                let dx = xs[i] - xs[j];
                let dy = ys[i] - ys[j];
                const d2 = dx * dx + dy * dy + 1e-6;
                const f = repulsion / d2;
                dx *= f;
                dy *= f;
                fx[i] += dx; fy[i] += dy;
                fx[j] -= dx; fy[j] -= dy;
            }
        }
        for (const [i, j] of springs) {
            const dx = xs[j] - xs[i];
            const dy = ys[j] - ys[i];
            const d = Math.sqrt(dx * dx + dy * dy) + 1e-9;
            const f = spring * (d - restLength) / d;
            fx[i] += f * dx; fy[i] += f * dy;
            fx[j] -= f * dx; fy[j] -= f * dy;
        }
        const cool = 1 - step / iterations;
        for (let i = 0; i < n; i++) {
            xs[i] += Math.max(-0.05, Math.min(0.05, fx[i])) * cool;
            ys[i] += Math.max(-0.05, Math.min(0.05, fy[i])) * cool;
        }
    }
    // normalize into the unit square with a small margin
    let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
    for (let i = 0; i < n; i++) {
        minX = Math.min(minX, xs[i]); maxX = Math.max(maxX, xs[i]);
        minY = Math.min(minY, ys[i]); maxY = Math.max(maxY, ys[i]);
    }
    const spanX = maxX - minX || 1;
    const spanY = maxY - minY || 1;
    const points = new Map<string, Point>();
    nodeIds.forEach((id, i) => {
        points.set(id, {
            x: 0.05 + 0.9 * ((xs[i] - minX) / spanX),
            y: 0.05 + 0.9 * ((ys[i] - minY) / spanY),
        });
    });
    return points;
}
