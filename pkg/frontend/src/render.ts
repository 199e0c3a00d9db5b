// DOM rendering: pattern table, subgraph view, error and empty states.

import { PatternRow } from "./browser.js";
import { layoutGraph } from "./layout.js";
import { MembersResponse } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function clear(element: HTMLElement): void {
    while (element.firstChild) {
        element.removeChild(element.firstChild);
    }
}

export function renderPatternTable(
    container: HTMLElement,
    rows: PatternRow[],
    onSelect: (index: number) => void,
    selected: number | null = null,
): void {
    clear(container);
    if (rows.length === 0) {
        const empty = container.ownerDocument.createElement("p");
        empty.className = "empty-state";
        empty.textContent = "No qualifying patterns for these parameters.";
        container.appendChild(empty);
        return;
    }
    const doc = container.ownerDocument;
    const table = doc.createElement("table");
    table.className = "patterns";
    const head = doc.createElement("tr");
    for (const title of ["pattern", "size", "quality"]) {
        const th = doc.createElement("th");
        th.textContent = title;
        head.appendChild(th);
    }
    table.appendChild(head);
    for (const row of rows) {
        const tr = doc.createElement("tr");
        tr.dataset.index = String(row.index);
        if (row.index === selected) {
            tr.className = "selected";
        }
        for (const text of [row.label, String(row.size), row.qualityText]) {
            const td = doc.createElement("td");
            td.textContent = text;
            tr.appendChild(td);
        }
        tr.addEventListener("click", () => onSelect(row.index));
        table.appendChild(tr);
    }
    container.appendChild(table);
}

export function renderError(container: HTMLElement, message: string,
                            onRetry?: () => void): void {
    clear(container);
    const doc = container.ownerDocument;
    const panel = doc.createElement("div");
    panel.className = "error-panel";
    const text = doc.createElement("p");
    text.textContent = message;
    panel.appendChild(text);
    if (onRetry) {
        const button = doc.createElement("button");
        button.textContent = "retry";
        button.addEventListener("click", onRetry);
        panel.appendChild(button);
    }
    container.appendChild(panel);
}

/** Members highlighted against their faded 1-hop neighborhood. */
export function renderSubgraph(
    container: HTMLElement,
    view: MembersResponse,
    seed: string,
    size = 520,
): void {
    clear(container);
    const doc = container.ownerDocument;
    const svg = doc.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${size} ${size}`);
    svg.setAttribute("class", "subgraph");
    const members = new Set(view.members);
    const points = layoutGraph(view.nodes.map((n) => n.id), view.edges, seed);
    const maxWeight = Math.max(1e-9, ...view.edges.map((e) => e.weight));

    for (const edge of view.edges) {
        const p1 = points.get(edge.source);
        const p2 = points.get(edge.target);
        if (!p1 || !p2) {
            continue;
        }
        const line = doc.createElementNS(SVG_NS, "line");
        line.setAttribute("x1", String(p1.x * size));
        line.setAttribute("y1", String(p1.y * size));
        line.setAttribute("x2", String(p2.x * size));
        line.setAttribute("y2", String(p2.y * size));
        line.setAttribute("stroke-width",
                          String(0.5 + 3.5 * (edge.weight / maxWeight)));
        const intra = members.has(edge.source) && members.has(edge.target);
        line.setAttribute("class", intra ? "edge member-edge" : "edge faded");
        svg.appendChild(line);
    }
    for (const node of view.nodes) {
        const p = points.get(node.id)!;
        const circle = doc.createElementNS(SVG_NS, "circle");
        circle.setAttribute("cx", String(p.x * size));
        circle.setAttribute("cy", String(p.y * size));
        circle.setAttribute("r", members.has(node.id) ? "9" : "5");
        circle.setAttribute("class",
                            members.has(node.id) ? "node member" : "node faded");
        const tooltip = doc.createElementNS(SVG_NS, "title");
        const attrs = node.selectors.map(([a, v]) => `${a}=${v}`).join(", ");
        tooltip.textContent = attrs ? `${node.id}: ${attrs}` : node.id;
        circle.appendChild(tooltip);
        svg.appendChild(circle);
    }
    container.appendChild(svg);
}

export function renderHistory(
    container: HTMLElement,
    entries: { runId: string; label: string; active: boolean }[],
    onRevisit: (runId: string) => void,
): void {
    clear(container);
    const doc = container.ownerDocument;
    const list = doc.createElement("ul");
    list.className = "history";
    for (const entry of entries) {
        const item = doc.createElement("li");
        const link = doc.createElement("a");
        link.textContent = entry.label;
        link.href = "#";
        if (entry.active) {
            item.className = "active";
        }
        link.addEventListener("click", (event) => {
            event.preventDefault();
            onRevisit(entry.runId);
        });
        item.appendChild(link);
        list.appendChild(item);
    }
    container.appendChild(list);
}
