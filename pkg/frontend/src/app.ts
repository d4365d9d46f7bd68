// Workbench shell: wires the document, the query loop, the canvas and the
// result panels together.  Pure DOM — mountApp() builds its own subtree so
// the whole app can be driven headlessly in tests with an injected client.

import { ApiError, Client, PathPayload } from './api.js';
import { loadSaved, restoreWorkspace, saveWorkspace, StorageLike } from './autosave.js';
import { GraphCanvas } from './canvas.js';
import { debounce } from './debounce.js';
import { Workspace } from './document.js';
import { Fixture, FIXTURES } from './fixtures.js';
import { pathBadges, pathEdges, pathLabel, samePath } from './inspector.js';
import { ivBadges, modifiedWitnesses, originalWitnesses, rejectedChips } from './ivpanel.js';
import { DEFAULT_DEBOUNCE_MS, QueryController } from './queries.js';

export interface AppOptions {
  client?: Client;
  storage?: StorageLike | null;
  debounceMs?: number;
}

export interface AppHandle {
  ws: Workspace;
  controller: QueryController;
  canvas: GraphCanvas;
  loadFixture(name: string): Promise<void>;
  /** Settles once any saved session has been restored. */
  ready: Promise<void>;
}

const SHELL_HTML = `
  <header class="toolbar">
    <strong class="brand">dsepkit workbench</strong>
    <label>examples
      <select data-id="fixture-menu">
        <option value="">choose…</option>
      </select>
    </label>
    <button type="button" data-id="import-btn">import .dag</button>
    <input type="file" accept=".dag,.txt" data-id="import-file" hidden>
    <button type="button" data-id="export-btn">export .dag</button>
    <span class="status" data-id="status" role="status"></span>
  </header>
  <div class="banner hidden" data-id="banner" role="alert"></div>
  <main class="columns">
    <section class="canvas-pane">
      <svg data-id="canvas" class="graph-canvas"></svg>
      <div class="canvas-tools">
        <input data-id="new-node-name" placeholder="new node name" aria-label="new node name">
        <button type="button" data-id="add-node">add node</button>
        <span data-id="node-tools" class="node-tools hidden">
          <span data-id="selected-node-label"></span>
          <button type="button" data-id="toggle-adjusted">adjust</button>
          <button type="button" data-id="toggle-latent">latent</button>
          <button type="button" data-id="toggle-selected">selected</button>
          <button type="button" data-id="start-edge">edge from here</button>
          <button type="button" data-id="delete-node">delete</button>
        </span>
        <span data-id="edge-hint" class="hint hidden">click the target node…</span>
      </div>
    </section>
    <section class="side-pane">
      <details open>
        <summary>document</summary>
        <textarea data-id="dsl" rows="14" spellcheck="false" aria-label="graph text"></textarea>
        <ul data-id="diagnostics" class="diagnostics"></ul>
      </details>
      <section class="panel query-panel">
        <h3>query</h3>
        <label>exposure <select data-id="exposure"></select></label>
        <label>outcome <select data-id="outcome"></select></label>
        <label>instrument candidate <select data-id="candidate"></select></label>
        <fieldset><legend>adjusted (boxed)</legend>
          <div data-id="adjusted-list" class="checklist"></div>
        </fieldset>
        <fieldset><legend>effect through (required nodes)</legend>
          <div data-id="through-list" class="checklist"></div>
        </fieldset>
      </section>
      <section class="panel">
        <h3>verdict</h3>
        <p data-id="verdict" class="verdict" role="status">—</p>
        <ul data-id="open-paths" class="path-list"></ul>
      </section>
      <section class="panel">
        <h3>paths</h3>
        <p data-id="paths-header"></p>
        <ol data-id="path-list" class="path-list"></ol>
      </section>
      <section class="panel">
        <h3>adjustment</h3>
        <p data-id="check-line"></p>
        <ul data-id="violations" class="path-list"></ul>
        <p class="subhead">valid sets</p>
        <ul data-id="sets-list"></ul>
      </section>
      <section class="panel iv-panel hidden" data-id="iv-panel">
        <h3>instrument</h3>
        <div data-id="iv-chips" class="chips"></div>
        <div data-id="iv-badges" class="badges"></div>
        <div class="iv-panes">
          <figure>
            <figcaption>A — original</figcaption>
            <svg data-id="iv-original" class="graph-canvas mini"></svg>
            <ul data-id="iv-original-paths" class="path-list"></ul>
          </figure>
          <figure>
            <figcaption data-id="iv-modified-caption">B — edge removed</figcaption>
            <svg data-id="iv-modified" class="graph-canvas mini"></svg>
            <ul data-id="iv-modified-paths" class="path-list"></ul>
          </figure>
        </div>
      </section>
      <section class="panel">
        <h3>transportability</h3>
        <ul data-id="transport-list" class="path-list"></ul>
      </section>
    </section>
  </main>
`;

function joined(tokens: string[]): string {
  return tokens.join(' ');
}

function setText(el: Element, text: string) {
  el.textContent = text;
}

export function mountApp(root: HTMLElement, opts: AppOptions = {}): AppHandle {
  const client = opts.client ?? new Client();
  const storage = opts.storage === undefined
    ? (typeof localStorage === 'undefined' ? null : localStorage)
    : opts.storage;
  const ws = new Workspace(client);
  const controller = new QueryController(ws, client, opts.debounceMs ?? DEFAULT_DEBOUNCE_MS);

  root.classList.add('app');
  root.innerHTML = SHELL_HTML;
  const $ = <T extends Element = HTMLElement>(id: string): T => {
    const el = root.querySelector(`[data-id="${id}"]`);
    if (!el) throw new Error(`missing element ${id}`);
    return el as T;
  };

  const canvasSvg = $<SVGSVGElement>('canvas');
  const ivOriginalSvg = $<SVGSVGElement>('iv-original');
  const ivModifiedSvg = $<SVGSVGElement>('iv-modified');

  // Transient view state (not part of the document).
  let selectedNode: string | null = null;
  let pendingEdgeFrom: string | null = null;
  let inspected: { tokens: string[]; revision: number } | null = null;

  const canvas = new GraphCanvas(canvasSvg, {
    onNodeClick(name) {
      if (pendingEdgeFrom !== null) {
        const from = pendingEdgeFrom;
        pendingEdgeFrom = null;
        if (from !== name) void ws.addEdge(from, name);
        else render();
        return;
      }
      selectedNode = selectedNode === name ? null : name;
      render();
    },
    onMoveNode(name, x, y) {
      void ws.moveNode(name, x, y);
    },
  }, 'arrow-main');
  const ivOriginal = new GraphCanvas(ivOriginalSvg, {}, 'arrow-iv-a');
  const ivModified = new GraphCanvas(ivModifiedSvg, {}, 'arrow-iv-b');

  // --- toolbar -----------------------------------------------------------
  const fixtureMenu = $<HTMLSelectElement>('fixture-menu');
  for (const f of FIXTURES) {
    const option = document.createElement('option');
    option.value = f.name;
    option.textContent = `${f.name} — ${f.title}`;
    fixtureMenu.appendChild(option);
  }
  fixtureMenu.addEventListener('change', () => {
    const f = FIXTURES.find((x) => x.name === fixtureMenu.value);
    if (f) void applyFixture(f);
  });

  async function applyFixture(f: Fixture) {
    const ok = await ws.loadText(f.dsl);
    if (!ok) return;
    ws.query.adjusted.clear();
    ws.query.through.clear();
    ws.query.candidate = f.preset.candidate ?? null;
    ws.setEndpoints(f.preset.exposure, f.preset.outcome);
  }

  $('import-btn').addEventListener('click', () => $<HTMLInputElement>('import-file').click());
  $<HTMLInputElement>('import-file').addEventListener('change', async (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    await ws.loadText(await file.text());
    input.value = '';
  });
  $('export-btn').addEventListener('click', () => {
    const text = ws.exportText();
    if (!text || typeof URL === 'undefined' || !URL.createObjectURL) return;
    const blob = new Blob([text], { type: 'text/plain' });
    const a = document.createElement('a');
    a.href = URL.createObjectURL(blob);
    a.download = 'graph.dag';
    a.click();
    URL.revokeObjectURL(a.href);
  });

  // --- document text -----------------------------------------------------
  const dslBox = $<HTMLTextAreaElement>('dsl');
  const parseSoon = debounce(() => { void ws.loadText(dslBox.value); },
                             opts.debounceMs ?? DEFAULT_DEBOUNCE_MS);
  dslBox.addEventListener('input', () => parseSoon());

  // --- canvas tools ------------------------------------------------------
  $('add-node').addEventListener('click', () => {
    const input = $<HTMLInputElement>('new-node-name');
    const name = input.value.trim();
    if (!name) return;
    input.value = '';
    if (ws.graph) void ws.addNode(name);
  });
  $('toggle-adjusted').addEventListener('click', () => {
    if (selectedNode) ws.toggleAdjusted(selectedNode);
  });
  $('toggle-latent').addEventListener('click', () => {
    if (selectedNode) void ws.toggleLatent(selectedNode);
  });
  $('toggle-selected').addEventListener('click', () => {
    if (selectedNode) void ws.toggleSelected(selectedNode);
  });
  $('start-edge').addEventListener('click', () => {
    pendingEdgeFrom = selectedNode;
    render();
  });
  $('delete-node').addEventListener('click', () => {
    if (selectedNode) {
      const name = selectedNode;
      selectedNode = null;
      void ws.removeNode(name);
    }
  });

  // --- query panel -------------------------------------------------------
  const exposureSel = $<HTMLSelectElement>('exposure');
  const outcomeSel = $<HTMLSelectElement>('outcome');
  const candidateSel = $<HTMLSelectElement>('candidate');

  function readEndpoints() {
    ws.setEndpoints(exposureSel.value || null, outcomeSel.value || null);
  }
  exposureSel.addEventListener('change', readEndpoints);
  outcomeSel.addEventListener('change', readEndpoints);
  candidateSel.addEventListener('change', () => {
    ws.setCandidate(candidateSel.value || null);
  });

  function fillSelect(sel: HTMLSelectElement, names: string[], current: string | null,
                      blank: string) {
    sel.innerHTML = '';
    const none = document.createElement('option');
    none.value = '';
    none.textContent = blank;
    sel.appendChild(none);
    for (const n of names) {
      const option = document.createElement('option');
      option.value = n;
      option.textContent = n;
      sel.appendChild(option);
    }
    sel.value = current ?? '';
  }

  function fillChecklist(host: HTMLElement, names: string[], checked: Set<string>,
                         disabled: Set<string>, onToggle: (name: string) => void) {
    host.innerHTML = '';
    for (const n of names) {
      const label = document.createElement('label');
      const box = document.createElement('input');
      box.type = 'checkbox';
      box.checked = checked.has(n);
      box.disabled = disabled.has(n);
      box.dataset.node = n;
      box.addEventListener('change', () => onToggle(n));
      label.appendChild(box);
      label.appendChild(document.createTextNode(' ' + n));
      host.appendChild(label);
    }
  }

  // --- rendering ---------------------------------------------------------

  function inspectedPayload(): PathPayload | null {
    if (!inspected || inspected.revision !== ws.revision) return null;
    const paths = controller.results.paths;
    if (!paths) return null;
    return paths.paths.find((p) => samePath(p.tokens, inspected?.tokens ?? [])) ?? null;
  }

  function renderCanvas() {
    if (!ws.graph) return;
    const selected = inspectedPayload();
    const badges = selected
      ? new Map(pathBadges(selected).map((b) => [b.node, { text: b.text, witness: b.witness }]))
      : undefined;
    const highlight = selected
      ? pathEdges(selected)
      : (controller.results.dsep?.open_paths ?? []).flatMap((tokens) =>
          pathEdges({ tokens } as PathPayload));
    const rejection = ws.lastEditRejection;
    canvas.render(ws.graph, {
      adjusted: ws.query.adjusted,
      highlightEdges: highlight,
      badges,
      rejectedEdge: rejection && rejection.edge
        ? { edge: rejection.edge, code: rejection.code }
        : null,
    });
  }

  function renderDiagnostics() {
    const list = $('diagnostics');
    list.innerHTML = '';
    const items = [...ws.diagnostics, ...ws.warnings];
    for (const d of items) {
      const li = document.createElement('li');
      li.className = d.severity;
      li.textContent = `${d.line}:${d.column} ${d.code} ${d.message}`;
      list.appendChild(li);
    }
  }

  function renderVerdict() {
    const dsep = controller.results.dsep;
    const verdictEl = $('verdict');
    const openList = $('open-paths');
    openList.innerHTML = '';
    if (!dsep) {
      const err = controller.errors.dsep;
      setText(verdictEl, err ? `unavailable — ${err.code}: ${err.message}` : '—');
      return;
    }
    const givenText = dsep.given.length ? `{${dsep.given.join(', ')}}` : '∅';
    const effectiveText = dsep.effective.length ? `{${dsep.effective.join(', ')}}` : '∅';
    const word = dsep.separated ? 'd-separated' : 'd-connected';
    let line = `${dsep.a} and ${dsep.b}: ${word} given ${givenText}`;
    if (effectiveText !== givenText) line += ` (effective ${effectiveText})`;
    setText(verdictEl, line);
    for (const tokens of dsep.open_paths) {
      const li = document.createElement('li');
      li.textContent = joined(tokens);
      openList.appendChild(li);
    }
  }

  function renderPaths() {
    const payload = controller.results.paths;
    const header = $('paths-header');
    const list = $('path-list');
    list.innerHTML = '';
    if (!payload) {
      setText(header, '');
      return;
    }
    const effectiveText = payload.effective.length
      ? `{${payload.effective.join(', ')}}` : '∅';
    setText(header,
            `${payload.count} path(s) from ${payload.from} to ${payload.to}, ` +
            `effective conditioning ${effectiveText}`);
    for (const p of payload.paths) {
      const li = document.createElement('li');
      const btn = document.createElement('button');
      btn.type = 'button';
      btn.className = 'path-item';
      if (inspected && samePath(p.tokens, inspected.tokens)) btn.classList.add('inspected');
      const flags = `${p.causal ? 'causal' : 'biasing'}, ${p.open ? 'open' : 'blocked'}`;
      btn.textContent = `${pathLabel(p)}  [${flags}]`;
      btn.addEventListener('click', () => {
        inspected = inspected && samePath(p.tokens, inspected.tokens)
          ? null
          : { tokens: p.tokens, revision: ws.revision };
        render();
      });
      li.appendChild(btn);
      list.appendChild(li);
    }
  }

  function renderAdjustment() {
    const check = controller.results.check;
    const line = $('check-line');
    const violations = $('violations');
    violations.innerHTML = '';
    if (check) {
      const setText_ = check.set.length ? `{${check.set.join(', ')}}` : '∅';
      const target = check.through.length
        ? `effect through {${check.through.join(', ')}}` : 'total effect';
      setText(line,
              `${setText_} is ${check.valid ? 'VALID' : 'NOT VALID'} for the ${target} ` +
              `(${check.checked_path_count} paths checked)`);
      for (const v of check.violations) {
        const li = document.createElement('li');
        li.textContent = `${joined(v.tokens)}  — ${v.kind}`;
        violations.appendChild(li);
      }
    } else {
      const err = controller.errors.check;
      setText(line, err ? `unavailable — ${err.code}: ${err.message}` : '');
    }

    const setsEl = $('sets-list');
    setsEl.innerHTML = '';
    const sets = controller.results.sets;
    if (sets) {
      if (sets.sets.length === 0) {
        const li = document.createElement('li');
        li.textContent = 'none';
        setsEl.appendChild(li);
      }
      for (const s of sets.sets) {
        const li = document.createElement('li');
        const label = s.set.length ? `{${s.set.join(', ')}}` : '{}';
        li.textContent = s.minimal ? `${label} (minimal)` : label;
        setsEl.appendChild(li);
      }
    }
  }

  function renderIv() {
    const panel = $('iv-panel');
    const payload = controller.results.iv;
    const error = controller.errors.iv ?? null;
    const chipsEl = $('iv-chips');
    const badgesEl = $('iv-badges');
    chipsEl.innerHTML = '';
    badgesEl.innerHTML = '';
    $('iv-original-paths').innerHTML = '';
    $('iv-modified-paths').innerHTML = '';
    if (!payload && !error) {
      panel.classList.add('hidden');
      return;
    }
    panel.classList.remove('hidden');

    const chips = [...ws.query.adjusted].sort();
    const rejected = new Set(rejectedChips(error, chips));
    if (chips.length === 0) {
      const none = document.createElement('span');
      none.className = 'chip empty';
      none.textContent = 'w = ∅';
      chipsEl.appendChild(none);
    }
    for (const chip of chips) {
      const el = document.createElement('span');
      el.className = rejected.has(chip) ? 'chip rejected' : 'chip';
      el.textContent = rejected.has(chip) ? `${chip} ✕ rejected: mediator` : chip;
      if (rejected.has(chip) && error) el.title = error.message;
      chipsEl.appendChild(el);
    }

    if (error && !payload) {
      const note = document.createElement('p');
      note.className = 'iv-error';
      note.textContent = `${error.code}: ${error.message}`;
      badgesEl.appendChild(note);
      return;
    }
    if (!payload) return;

    for (const b of ivBadges(payload)) {
      const el = document.createElement('span');
      el.className = b.ok ? 'badge ok' : 'badge bad';
      el.textContent = `${b.label}: ${b.text}`;
      badgesEl.appendChild(el);
    }
    const summary = document.createElement('span');
    summary.className = payload.valid ? 'badge ok summary' : 'badge bad summary';
    summary.textContent = payload.valid
      ? `${payload.candidate} is a usable instrument`
      : `${payload.candidate} is not a usable instrument`;
    badgesEl.appendChild(summary);

    if (ws.graph) {
      ivOriginal.render(ws.graph, {
        interactive: false,
        highlightEdges: payload.original_open_paths.flatMap((tokens) =>
          pathEdges({ tokens } as PathPayload)),
      });
    }
    const removed = payload.removed_edges;
    const caption = $('iv-modified-caption');
    setText(caption, removed.length
      ? `B — without ${removed.map((e) => `${e.tail} → ${e.head}`).join(', ')}`
      : 'B — nothing removed');
    // Pane B is the server's surgery result; removed edges are drawn ghosted
    // on top of it so the cut is visible.
    ivModified.render(
      { nodes: payload.modified.nodes, edges: [...payload.modified.edges, ...removed] },
      {
        interactive: false,
        ghostEdges: removed,
        highlightEdges: payload.modified_open_paths.flatMap((tokens) =>
          pathEdges({ tokens } as PathPayload)),
      },
    );
    for (const text of originalWitnesses(payload)) {
      const li = document.createElement('li');
      li.textContent = text;
      $('iv-original-paths').appendChild(li);
    }
    for (const text of modifiedWitnesses(payload)) {
      const li = document.createElement('li');
      li.className = 'witness';
      li.textContent = text;
      $('iv-modified-paths').appendChild(li);
    }
  }

  function renderTransport() {
    const list = $('transport-list');
    list.innerHTML = '';
    for (const slot of controller.results.transport) {
      const li = document.createElement('li');
      if (slot.payload) {
        const p = slot.payload;
        const head = `${p.selection} → ${p.outcome}: transport ` +
          (p.transportable_suggested ? 'suggested' : 'NOT suggested');
        li.textContent = p.open_paths.length
          ? `${head} — open: ${p.open_paths.map(joined).join(' ; ')}`
          : head;
      } else if (slot.error) {
        li.textContent = `${slot.selection}: unavailable — ${slot.error.code}`;
      } else {
        li.textContent = `${slot.selection}: …`;
      }
      list.appendChild(li);
    }
  }

  function renderBanner() {
    const banner = $('banner');
    const pieces: string[] = [];
    for (const key of ['dsep', 'paths', 'check', 'sets'] as const) {
      const err = controller.errors[key];
      if (err) pieces.push(`${key}: ${err.code} — ${err.message}`);
    }
    const ivErr = controller.errors.iv;
    if (ivErr && ivErr.code !== 'MEDIATOR_IN_SET') {
      pieces.push(`iv: ${ivErr.code} — ${ivErr.message}`);
    }
    if (ws.lastEditRejection && !ws.lastEditRejection.edge) {
      const r = ws.lastEditRejection;
      pieces.push(`edit rejected: ${r.code} — ${r.message}`);
    }
    if (pieces.length) {
      banner.classList.remove('hidden');
      setText(banner, pieces.join(' · '));
    } else {
      banner.classList.add('hidden');
      setText(banner, '');
    }
  }

  function render() {
    const names = ws.nodeNames();
    const q = ws.query;
    if (document.activeElement !== dslBox && dslBox.value !== ws.text) {
      dslBox.value = ws.text;
    }
    setText($('status'), ws.graph
      ? `${names.length} node(s), ${ws.graph.edges.length} edge(s)` +
        (ws.diagnostics.length ? ' · parse error' : '')
      : 'no document');

    const measurable = ws.graph
      ? ws.graph.nodes.filter((n) => !n.latent).map((n) => n.name)
      : [];
    fillSelect(exposureSel, measurable, q.exposure, '(exposure)');
    fillSelect(outcomeSel, measurable, q.outcome, '(outcome)');
    fillSelect(candidateSel,
               measurable.filter((n) => n !== q.exposure && n !== q.outcome),
               q.candidate, '(none)');
    const endpointBan = new Set([q.exposure, q.outcome].filter(
      (n): n is string => n !== null));
    fillChecklist($('adjusted-list'), measurable, q.adjusted, endpointBan,
                  (n) => ws.toggleAdjusted(n));
    fillChecklist($('through-list'),
                  measurable.filter((n) => !endpointBan.has(n)),
                  q.through, new Set(), (n) => ws.toggleThrough(n));

    const tools = $('node-tools');
    if (selectedNode && names.includes(selectedNode)) {
      tools.classList.remove('hidden');
      setText($('selected-node-label'), selectedNode);
    } else {
      selectedNode = null;
      tools.classList.add('hidden');
    }
    $('edge-hint').classList.toggle('hidden', pendingEdgeFrom === null);

    renderDiagnostics();
    renderCanvas();
    renderVerdict();
    renderPaths();
    renderAdjustment();
    renderIv();
    renderTransport();
    renderBanner();

    if (storage) saveWorkspace(storage, ws);
  }

  ws.onChange = () => {
    if (inspected && inspected.revision !== ws.revision) inspected = null;
    render();
    controller.schedule();
  };
  controller.onUpdate = () => render();

  const ready = (async () => {
    if (storage && loadSaved(storage)) {
      await restoreWorkspace(storage, ws);
    }
    render();
  })();

  return {
    ws,
    controller,
    canvas,
    loadFixture: async (name: string) => {
      const f = FIXTURES.find((x) => x.name === name);
      if (!f) throw new Error(`unknown fixture ${name}`);
      await applyFixture(f);
    },
    ready,
  };
}
