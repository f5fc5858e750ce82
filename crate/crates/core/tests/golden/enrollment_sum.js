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
var cz = MMLRT.GetCountry(MMLRT.GetCountries(data), "CZE");
var total = function (s) { return $List_fold(function (a) { return function (p) { return (a + $snd(p)); }; }, 0.0, s); };

var $result = total(MMLRT.GetIndicator(cz, "SE.TER.ENRR"));
