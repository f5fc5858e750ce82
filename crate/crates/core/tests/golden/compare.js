// Generated by mml. Load mmlrt.js first; it defines the MMLRT runtime object.
"use strict";

function $List_fold(f, acc, xs) {
  var a = $toArray(xs);
  for (var i = 0; i < a.length; i++) acc = f(acc)(a[i]);
  return acc;
}
function $snd(p) { return p[1]; }
function $toArray(xs) {
  if (xs instanceof Array) return xs;
  var r = [];
  while (xs !== MMLRT.nil) { r.push(xs.h); xs = xs.t; }
  return r;
}

var data = ({});
var latest = function (s) { return $List_fold(function (a) { return function (p) { return $snd(p); }; }, 0.0, s); };

MMLRT.async_startImmediate(MMLRT.async_delay(function ($u) { return MMLRT.async_bind(MMLRT.AsyncGetIndicator(MMLRT.GetCountry(MMLRT.GetCountries(data), "CZE"), "SE.TER.ENRR"), function (cz) { return MMLRT.async_bind(MMLRT.AsyncGetIndicator(MMLRT.GetCountry(MMLRT.GetCountries(data), "GBR"), "SE.TER.ENRR"), function (uk) { var a = latest(cz); var b = latest(uk); return MMLRT.async_return([((a > b) ? "Czech Republic" : "United Kingdom"), a, b]); }); }); }));
